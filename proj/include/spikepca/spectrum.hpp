#pragma once

#include <cstdint>

#include "spikepca/eig.hpp"
#include "spikepca/linalg.hpp"

namespace spikepca {

/// Top two eigenpairs of scale * X^T X (the p-dimensional covariance side)
/// computed without forming the p x p matrix when avoidable: the smaller-side
/// Gram is solved densely up to `dense_cutoff`, and an implicitly restarted-
/// free Lanczos with full reorthogonalization handles larger problems.
struct TopSpectrum {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Vector v1, v2;  // p-dimensional, unit norm
    int lanczos_steps = 0;  // 0 when the dense path ran
};

TopSpectrum sample_top_two(const Matrix& x, double scale, std::uint64_t lanczos_stream = 1,
                           std::size_t dense_cutoff = 700);

/// Largest eigenvalue of scale * X^T X only.
double sample_spectral_norm(const Matrix& x, double scale, std::uint64_t lanczos_stream = 1,
                            std::size_t dense_cutoff = 700);

}  // namespace spikepca
