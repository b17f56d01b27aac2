#pragma once

#include <cstdint>
#include <string>

#include "spikepca/linalg.hpp"
#include "spikepca/rng.hpp"

namespace spikepca {

/// Latent variable law for the signal component u: zero mean, unit variance,
/// finite fourth moment.
enum class LatentLaw { Gaussian, Rademacher, UniformUnitVariance };

double latent_fourth_moment(LatentLaw law) noexcept;
double draw_latent(rng::Philox& gen, LatentLaw law) noexcept;
std::string latent_law_name(LatentLaw law);
LatentLaw latent_law_from_name(const std::string& name);

/// Population parameters of the single-spike model x = u*signal_norm*e1 + sigma*xi.
struct SpikedModel {
    double signal_norm;                           // ||v||
    double noise_level;                           // sigma
    std::size_t dimension;                        // p
    LatentLaw latent_law = LatentLaw::Gaussian;

    SpikedModel(double signal_norm_, double noise_level_, std::size_t dimension_,
                LatentLaw law = LatentLaw::Gaussian);

    /// signal_norm^2 * e1 e1^T + sigma^2 I (derived, never stored).
    Matrix population_covariance() const;
};

/// n samples with full latent bookkeeping. Row nu of `samples` is exactly
/// latents_u[nu]*signal_norm*e1 + noise_level*latents_xi.row(nu).
struct SampleRealization {
    std::size_t n = 0;
    Matrix samples;     // n x p
    Vector latents_u;   // n
    Matrix latents_xi;  // n x p
    std::uint64_t seed = 0;
};

/// Deterministic for fixed (model, n, seed): equivalent to
/// sample_model_stream with stream 0.
SampleRealization sample_model(const SpikedModel& model, std::size_t n, std::uint64_t seed);

/// Stream-addressed variant used by the Monte Carlo harness; every
/// (seed, stream) pair is an independent generator stream. Draw order per
/// sample: u first, then xi_1..xi_p.
SampleRealization sample_model_stream(const SpikedModel& model, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream);

/// (1/n) X^T X, divisor n, no mean centering by default. Enabling
/// mean_center subtracts the empirical mean first; results then sit outside
/// the theory this library evaluates and are labeled as such by the CLI.
Matrix sample_covariance(const SampleRealization& real, bool mean_center = false);

/// kappa, s_u, rho, beta and the decomposition S_n = L0 + sigma*L1 + sigma^2*L2.
struct CovarianceDecomposition {
    double s_u = 0.0;    // sqrt((1/n) sum u^2)
    double kappa = 0.0;  // ||v|| * s_u
    Vector rho;          // length p, rho[0] is the signal-axis interaction
    Matrix beta;         // p x p noise Gram (1/n) Xi^T Xi
    Matrix L0, L1, L2;   // constant / linear / quadratic parts in sigma
};

CovarianceDecomposition decompose_covariance(const SampleRealization& real,
                                             const SpikedModel& model);

/// CSV (rows = samples) plus JSON sidecar with seed, model parameters and
/// the latent vectors.
void write_realization_csv(const SampleRealization& real, const std::string& path);
void write_realization_sidecar(const SampleRealization& real, const SpikedModel& model,
                               const std::string& path);

}  // namespace spikepca
