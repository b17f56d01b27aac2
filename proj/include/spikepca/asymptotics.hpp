#pragma once

#include <cstddef>
#include <string>

#include "spikepca/density.hpp"
#include "spikepca/linalg.hpp"

namespace spikepca {

/// Marchenko-Pastur bulk edges (1 -/+ sqrt(c))^2 for aspect ratio c = p/n.
double mp_edge_low(double c);
double mp_edge_high(double c);

/// Bulk density at x (0 outside the support). For c > 1 the extra point mass
/// at zero is reported separately by mp_zero_mass.
double mp_density(double c, double x);
double mp_zero_mass(double c);

/// integral of f(x) against the MP bulk density, sin^2 substitution at the
/// edges (spectrally accurate on the smooth transformed integrand).
double mp_integral(double c, const std::function<double(double)>& f, double tol = 1e-12);

/// integral of f_MP(x) * x / (lam - x) dx; requires lam above the bulk.
double mp_lambda_functional(double c, double lam);
/// closed form at c = 1: (lam - 2 - sqrt(lam (lam-4)))/2.
double mp_lambda_functional_closed_c1(double lam);

/// Joint-limit prediction for the top eigenvalue and squared overlap.
struct AsymptoticPrediction {
    double c = 0.0;
    double lambda_limit = 0.0;
    double overlap_sq = 0.0;
    bool above_threshold = false;
    double threshold_ratio = 0.0;  // sigma^4 / ||v||^4
};

AsymptoticPrediction phase_prediction(double signal_norm, double sigma, double c);
std::string prediction_to_json(const AsymptoticPrediction& p);

/// Rough crossover location p/n = kappa^4/(4 sigma^4).
double heuristic_threshold(double kappa, double sigma);

/// Finite-p mean shift of the k-th population eigenvalue (alphas descending,
/// k is 1-based). DegenerateSpectrum if alpha_k collides with another alpha.
double lawley_shift(const Vector& alphas, std::size_t n, std::size_t k);

/// Pulled-up eigenvalue T(alpha) = alpha + c alpha integral rho/(alpha-rho) h;
/// requires alpha above the support of h.
double spike_transform(double alpha, double c, const NoiseDensity& h);
/// dT/dalpha = 1 - c integral rho^2/(alpha-rho)^2 h.
double spike_transform_derivative(double alpha, double c, const NoiseDensity& h);

struct NoiseNormLimit {
    double alpha_star = 0.0;
    double norm = 0.0;  // T(alpha_star)
};

/// Spectral norm of the pure-noise covariance in the joint limit: the value
/// of T at its stationary point above the support.
NoiseNormLimit noise_norm_limit(double c, const NoiseDensity& h);

struct Corollary3Approx {
    double alpha_star_approx = 0.0;
    double norm_approx = 0.0;
    bool regime_ok = false;  // c >= 10 heuristic validity flag
};

Corollary3Approx corollary3_approx(double c, const NoiseDensity& h);

struct StieltjesState {
    double z = 0.0;
    double m = 0.0;      // transform of the limiting sample-eigenvalue law
    double m_bar = 0.0;  // companion (dual) transform
};

/// Solve the self-consistent equation m = integral h(t)/(t(1-c-mz)-z) dt for
/// real z above the support of the limiting law; damped fixed point with a
/// monotone inverse-equation bisection fallback.
StieltjesState stieltjes_solve(double z, double c, const NoiseDensity& h);

/// Inverse relation z(m_bar) = -1/m_bar + c integral t/(1+t m_bar) h dt.
double stieltjes_inverse(double m_bar, double c, const NoiseDensity& h);

/// Squared overlap via the resolvent-squared integral; agrees with the
/// phase_prediction closed form above threshold.
double overlap_functional(double signal_norm, double sigma, double c);

}  // namespace spikepca
