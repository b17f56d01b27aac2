#include "spikepca/sweep.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "spikepca/asymptotics.hpp"
#include "spikepca/eig.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/rng.hpp"

namespace spikepca {

namespace {

void validate_common(const SweepSpec& spec) {
    if (spec.trials < 1) throw PreconditionError("sweep: trials must be >= 1");
}

Overlay make_overlay(const SpikedModel& model, double sigma, std::size_t n) {
    Overlay ov;
    const double c = static_cast<double>(model.dimension) / static_cast<double>(n);
    if (model.signal_norm > 0.0 && sigma > 0.0) {
        const AsymptoticPrediction pred = phase_prediction(model.signal_norm, sigma, c);
        ov.lambda_limit = pred.lambda_limit;
        ov.r2_limit = pred.overlap_sq;
        ov.above_threshold = pred.above_threshold;
    } else {
        ov.lambda_limit = model.signal_norm * model.signal_norm + sigma * sigma;
        ov.r2_limit = model.signal_norm > 0.0 ? 1.0 : 0.0;
        ov.above_threshold = model.signal_norm > 0.0;
    }
    // population-proxy bound overlay (kappa at s_u = 1), where defined
    ov.bounds_valid = false;
    if (model.signal_norm > 0.0 && model.dimension >= 2 && n <= model.dimension) {
        try {
            const BoundConfig cfg =
                default_bound_config(model.dimension, n, sigma, model.signal_norm);
            if (signal_condition(cfg)) {
                const auto [lo, hi] = lambda_bounds(cfg);
                ov.lambda_lower = lo;
                ov.lambda_upper = hi;
                ov.sintheta_upper = sintheta_bound(cfg);
                ov.bounds_valid = true;
            }
        } catch (const std::exception&) {
            ov.bounds_valid = false;
        }
    }
    return ov;
}

struct TopPairVectors {
    double lambda1 = 0.0, lambda2 = 0.0;
    Vector v1, v2;
};

// Rank of the signal-bearing branch, continued across the grid. Raw vector
// continuation follows the adiabatic branches through the (broad, at desk
// scale) avoided crossings and never registers the exchange, so the tracker
// follows the signal-axis content instead. A flip only counts while that
// content is statistically distinguishable from a random direction (99th
// percentile of the null overlap, 2.576/sqrt(p)); below it, the branch
// identity is lost in noise and rank labels freeze.
struct Tracker {
    double guard = 0.0;  // 2.576 / sqrt(p)
    int rank = 1;
    bool meaningful = false;
    bool initialized = false;

    explicit Tracker(std::size_t p)
        : guard(2.576 / std::sqrt(static_cast<double>(p))) {}

    // returns true when the signal branch exchanged rank in this interval
    bool update(const TopPairVectors& top) {
        const double r1 = std::fabs(top.v1[0]);
        const double r2 = std::fabs(top.v2[0]);
        const int winner_rank = r1 >= r2 ? 1 : 2;
        const double winner = std::max(r1, r2);
        const bool meaningful_now = winner >= guard;
        bool fire = false;
        if (!initialized) {
            rank = winner_rank;
            initialized = true;
        } else {
            fire = meaningful && meaningful_now && winner_rank != rank;
            if (meaningful_now) rank = winner_rank;
        }
        meaningful = meaningful_now;
        return fire;
    }
};

}  // namespace

std::vector<SweepRecord> sweep_sigma(const SweepSpec& spec) {
    validate_common(spec);
    if (spec.sigma_grid.empty()) throw PreconditionError("sweep_sigma: sigma grid required");
    for (std::size_t g = 0; g + 1 < spec.sigma_grid.size(); ++g)
        if (!(spec.sigma_grid[g] < spec.sigma_grid[g + 1]))
            throw PreconditionError("sweep_sigma: grid must be strictly ascending");
    if (spec.n < 1) throw PreconditionError("sweep_sigma: n must be >= 1");

    const std::size_t p = spec.model.dimension;
    const std::size_t n = spec.n;
    const std::size_t ngrid = spec.sigma_grid.size();
    const double vn = spec.model.signal_norm;

    std::vector<SweepRecord> records(ngrid);
    for (std::size_t g = 0; g < ngrid; ++g) {
        records[g].grid_value = spec.sigma_grid[g];
        records[g].trials.resize(spec.trials);
        records[g].overlay = make_overlay(spec.model, spec.sigma_grid[g], n);
    }

    const std::int64_t trials = static_cast<std::int64_t>(spec.trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const SampleRealization real = sample_model_stream(
            spec.model, n, spec.seed, rng::stream_id(0, static_cast<std::uint64_t>(trial)));
        const Vector& u = real.latents_u;
        const Matrix& xi = real.latents_xi;

        // sigma-parametrized dual Gram: B(sigma) = B0 + sigma B1 + sigma^2 B2
        const bool dual = n <= p;
        Matrix b0, b1, b2;
        if (dual) {
            const double inv_n = 1.0 / static_cast<double>(n);
            b0 = Matrix(n, n);
            b1 = Matrix(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    b0(i, j) = vn * vn * u[i] * u[j] * inv_n;
                    b1(i, j) = vn * (u[i] * xi(j, 0) + u[j] * xi(i, 0)) * inv_n;
                }
            b2 = linalg::gram_dual(xi, inv_n);
        }

        Tracker tracker(p);
        for (std::size_t g = 0; g < ngrid; ++g) {
            const double sigma = spec.sigma_grid[g];
            TopPairVectors top;
            if (dual) {
                Matrix b(n, n);
                for (std::size_t i = 0; i < n * n; ++i)
                    b.data()[i] = b0.data()[i] + sigma * b1.data()[i] +
                                  sigma * sigma * b2.data()[i];
                EigResult eig = sym_eig_topk(b, 2);
                top.lambda1 = eig.values[0];
                top.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
                // primal vector: v = X(sigma)^T y, X(sigma) = u vn e1^T + sigma Xi
                auto to_primal = [&](std::size_t col) {
                    Vector y(n);
                    for (std::size_t i = 0; i < n; ++i) y[i] = eig.vectors(i, col);
                    Vector v = linalg::matvec_transposed(xi, y);
                    linalg::scale(v, sigma);
                    v[0] += vn * linalg::dot(y, u);
                    const double norm = linalg::norm2(v);
                    if (norm > 0.0) linalg::scale(v, 1.0 / norm);
                    return v;
                };
                top.v1 = to_primal(0);
                top.v2 = eig.vectors.cols() > 1 ? to_primal(1) : Vector(p, 0.0);
            } else {
                Matrix x(n, p);
                for (std::size_t i = 0; i < n; ++i) {
                    const double* xir = xi.row(i);
                    double* xr = x.row(i);
                    for (std::size_t j = 0; j < p; ++j) xr[j] = sigma * xir[j];
                    xr[0] += u[i] * vn;
                }
                const Matrix cov = linalg::gram(x, 1.0 / static_cast<double>(n));
                EigResult eig = sym_eig_topk(cov, 2);
                top.lambda1 = eig.values[0];
                top.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
                top.v1.assign(p, 0.0);
                top.v2.assign(p, 0.0);
                for (std::size_t i = 0; i < p; ++i) top.v1[i] = eig.vectors(i, 0);
                if (eig.vectors.cols() > 1)
                    for (std::size_t i = 0; i < p; ++i) top.v2[i] = eig.vectors(i, 1);
            }

            TrialPoint& pt = records[g].trials[trial];
            pt.lambda1 = top.lambda1;
            pt.lambda2 = top.lambda2;
            pt.overlap = std::min(1.0, std::fabs(top.v1[0]));
            pt.sin_theta = std::sqrt(std::max(0.0, 1.0 - pt.overlap * pt.overlap));
            pt.crossover = tracker.update(top);
        }
    }

    for (SweepRecord& rec : records) {
        double so = 0.0, sl = 0.0;
        for (const TrialPoint& pt : rec.trials) {
            so += pt.overlap;
            sl += pt.lambda1;
        }
        rec.mean_overlap = so / static_cast<double>(rec.trials.size());
        rec.mean_lambda1 = sl / static_cast<double>(rec.trials.size());
    }
    return records;
}

std::vector<SweepRecord> sweep_n(const SweepSpec& spec) {
    validate_common(spec);
    if (spec.n_grid.empty()) throw PreconditionError("sweep_n: n grid required");
    for (std::size_t g = 0; g + 1 < spec.n_grid.size(); ++g)
        if (!(spec.n_grid[g] < spec.n_grid[g + 1]))
            throw PreconditionError("sweep_n: grid must be strictly ascending");
    if (spec.n_grid.front() < 1) throw PreconditionError("sweep_n: n must be >= 1");

    const std::size_t p = spec.model.dimension;
    const std::size_t n_max = spec.n_grid.back();
    const std::size_t ngrid = spec.n_grid.size();
    const double sigma = spec.model.noise_level;

    std::vector<SweepRecord> records(ngrid);
    for (std::size_t g = 0; g < ngrid; ++g) {
        records[g].grid_value = static_cast<double>(spec.n_grid[g]);
        records[g].trials.resize(spec.trials);
        records[g].overlay = make_overlay(spec.model, sigma, spec.n_grid[g]);
    }

    const std::int64_t trials = static_cast<std::int64_t>(spec.trials);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        const SampleRealization real = sample_model_stream(
            spec.model, n_max, spec.seed, rng::stream_id(0, static_cast<std::uint64_t>(trial)));
        // unnormalized sample inner products, shared across the nested prefixes
        const Matrix gfull = linalg::gram_dual(real.samples, 1.0);

        Tracker tracker(p);
        for (std::size_t g = 0; g < ngrid; ++g) {
            const std::size_t n = spec.n_grid[g];
            const double inv_n = 1.0 / static_cast<double>(n);
            TopPairVectors top;
            if (n <= p) {
                Matrix b(n, n);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) b(i, j) = gfull(i, j) * inv_n;
                EigResult eig = sym_eig_topk(b, std::min<std::size_t>(2, n));
                top.lambda1 = eig.values[0];
                top.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
                auto to_primal = [&](std::size_t col) {
                    Vector v(p, 0.0);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double w = eig.vectors(i, col);
                        const double* row = real.samples.row(i);
                        for (std::size_t j = 0; j < p; ++j) v[j] += w * row[j];
                    }
                    const double norm = linalg::norm2(v);
                    if (norm > 0.0) linalg::scale(v, 1.0 / norm);
                    return v;
                };
                top.v1 = to_primal(0);
                top.v2 = eig.vectors.cols() > 1 ? to_primal(1) : Vector(p, 0.0);
            } else {
                Matrix x(n, p);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < p; ++j) x(i, j) = real.samples(i, j);
                const Matrix cov = linalg::gram(x, inv_n);
                EigResult eig = sym_eig_topk(cov, 2);
                top.lambda1 = eig.values[0];
                top.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
                top.v1.assign(p, 0.0);
                top.v2.assign(p, 0.0);
                for (std::size_t i = 0; i < p; ++i) top.v1[i] = eig.vectors(i, 0);
                if (eig.vectors.cols() > 1)
                    for (std::size_t i = 0; i < p; ++i) top.v2[i] = eig.vectors(i, 1);
            }

            TrialPoint& pt = records[g].trials[trial];
            pt.lambda1 = top.lambda1;
            pt.lambda2 = top.lambda2;
            pt.overlap = std::min(1.0, std::fabs(top.v1[0]));
            pt.sin_theta = std::sqrt(std::max(0.0, 1.0 - pt.overlap * pt.overlap));
            pt.crossover = tracker.update(top);
        }
    }

    for (SweepRecord& rec : records) {
        double so = 0.0, sl = 0.0;
        for (const TrialPoint& pt : rec.trials) {
            so += pt.overlap;
            sl += pt.lambda1;
        }
        rec.mean_overlap = so / static_cast<double>(rec.trials.size());
        rec.mean_lambda1 = sl / static_cast<double>(rec.trials.size());
    }
    return records;
}

}  // namespace spikepca
