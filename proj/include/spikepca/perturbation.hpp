#pragma once

#include <array>
#include <cmath>
#include <string>

#include "spikepca/model.hpp"

namespace spikepca {

/// Quadratic expansion of the signal-branch eigenpair in the noise level.
/// lambda_terms = (kappa^2, 2 kappa rho_1, sum_{j>=2} rho_j^2 + beta_11);
/// vector_terms = (e1, (0, rho_2..rho_p)/kappa,
///                 ((0, beta_12..beta_1p) - 2 rho_1 (0, rho_2..rho_p))/kappa^2).
struct TaylorEigenpair {
    std::array<double, 3> lambda_terms{};
    std::array<Vector, 3> vector_terms{};
    std::string radius_note;

    double lambda_at(double sigma) const {
        return lambda_terms[0] + sigma * (lambda_terms[1] + sigma * lambda_terms[2]);
    }
    /// v0 + sigma*v1, unnormalized.
    Vector linear_vector_at(double sigma) const;
    /// False once the quadratic term reaches half the constant term, the
    /// operational flag for leaving the trusted expansion region.
    bool within_trust_region(double sigma) const {
        return std::fabs(lambda_terms[2]) * sigma * sigma <= 0.5 * lambda_terms[0];
    }
};

TaylorEigenpair taylor_expand(const CovarianceDecomposition& decomp);

/// Small-sigma mean and the two variance readings of the top eigenvalue.
/// Valid modulo O(sigma^4) and transcendentally small crossover terms; the
/// girshick variant replaces E{u^4} by the centered Var{u^2}.
struct LambdaMoments {
    double mean = 0.0;
    double variance_printed = 0.0;
    double variance_girshick = 0.0;
};

LambdaMoments lambda_moments(const SpikedModel& model, std::size_t n);

/// Small-sigma mean and variance of sin(theta); the variance carries a
/// 1 + O(1/p) caveat.
struct SinThetaMoments {
    double mean = 0.0;
    double variance = 0.0;
};

SinThetaMoments sintheta_moments(double kappa, std::size_t n, std::size_t p, double sigma);

}  // namespace spikepca
