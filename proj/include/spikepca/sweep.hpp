#pragma once

#include <cstdint>
#include <vector>

#include "spikepca/bounds.hpp"
#include "spikepca/model.hpp"

namespace spikepca {

/// Monte Carlo sweep description. Exactly one of sigma_grid / n_grid is used
/// per operation; grids must be strictly ascending and trials >= 1.
struct SweepSpec {
    SpikedModel model;
    std::size_t n = 0;  // sample count for sigma sweeps
    Vector sigma_grid;
    std::vector<std::size_t> n_grid;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
};

struct TrialPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double overlap = 0.0;    // R = |<v_pca, e1>|
    double sin_theta = 0.0;
    bool crossover = false;  // rank exchange of the tracked signal vector in
                             // the grid interval ending here
};

struct Overlay {
    double lambda_limit = 0.0;
    double r2_limit = 0.0;
    bool above_threshold = false;
    double lambda_lower = 0.0, lambda_upper = 0.0, sintheta_upper = 0.0;
    bool bounds_valid = false;
};

struct SweepRecord {
    double grid_value = 0.0;
    std::vector<TrialPoint> trials;  // indexed by trial
    Overlay overlay;
    double mean_overlap = 0.0;
    double mean_lambda1 = 0.0;
};

/// Noise-level sweep at fixed n. Each trial draws one realization from
/// stream (seed, trial) and rescales its noise across the grid, so the
/// crossover of that trial's eigenvalue branches is a real event and the
/// tracked eigenvector continues meaningfully.
std::vector<SweepRecord> sweep_sigma(const SweepSpec& spec);

/// Sample-size sweep: one realization of max(n_grid) samples per trial,
/// grid point n uses the first n samples (nested prefixes).
std::vector<SweepRecord> sweep_n(const SweepSpec& spec);

}  // namespace spikepca
