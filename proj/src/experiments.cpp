#include "spikepca/experiments.hpp"

#include <cmath>
#include <cstdint>

#include "json.hpp"
#include "spikepca/eig.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/perturbation.hpp"
#include "spikepca/rng.hpp"
#include "spikepca/spectrum.hpp"

namespace spikepca {

CoverageReport coverage_experiment(const BoundConfig& cfg, const SpikedModel& model,
                                   std::size_t trials, std::uint64_t seed) {
    if (!signal_condition(cfg))
        throw ConditionViolated("coverage_experiment: signal condition fails at the nominal kappa");
    if (cfg.n > cfg.p)
        throw RegimeViolation("coverage_experiment: the bounds require n <= p");
    if (trials < 1) throw PreconditionError("coverage_experiment: trials must be >= 1");

    CoverageReport rep;
    rep.config = cfg;
    rep.trials = trials;
    rep.budget = epsilon_budget(cfg).total();
    rep.wishart_eps = wishart_norm_bound(cfg.p, cfg.n).eps;
    const double wbound = wishart_norm_bound(cfg.p, cfg.n).norm_bound;

    SpikedModel trial_model = model;
    trial_model.noise_level = cfg.sigma;

    std::size_t lower_v = 0, upper_v = 0, sin_v = 0, joint_v = 0, cond_f = 0, wish_v = 0;
    const std::int64_t nt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic) \
    reduction(+ : lower_v, upper_v, sin_v, joint_v, cond_f, wish_v)
    for (std::int64_t t = 0; t < nt; ++t) {
        const SampleRealization real = sample_model_stream(
            trial_model, cfg.n, seed, rng::stream_id(0, static_cast<std::uint64_t>(t)));

        double su2 = 0.0;
        for (double u : real.latents_u) su2 += u * u;
        su2 /= static_cast<double>(cfg.n);
        BoundConfig tc = cfg;
        tc.kappa = model.signal_norm * std::sqrt(su2);

        const TopSpectrum top = sample_top_two(real.samples, 1.0 / static_cast<double>(cfg.n),
                                               rng::stream_id(1, static_cast<std::uint64_t>(t)));
        const double overlap = std::fabs(top.v1[0]);
        const double sintheta = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));

        bool joint_bad = false;
        if (!signal_condition(tc)) {
            ++cond_f;
            joint_bad = true;  // the theorem claims nothing here; count conservatively
        } else {
            try {
                const auto [lo, hi] = lambda_bounds(tc);
                if (top.lambda1 < lo) {
                    ++lower_v;
                    joint_bad = true;
                }
                if (top.lambda1 > hi) {
                    ++upper_v;
                    joint_bad = true;
                }
                const double sb = sintheta_bound(tc);
                if (sintheta > sb) {
                    ++sin_v;
                    joint_bad = true;
                }
            } catch (const ConditionViolated&) {
                ++cond_f;
                joint_bad = true;
            }
        }
        if (joint_bad) ++joint_v;

        const double wnorm =
            sample_spectral_norm(real.latents_xi, 1.0 / static_cast<double>(cfg.n),
                                 rng::stream_id(2, static_cast<std::uint64_t>(t)));
        if (wnorm > wbound) ++wish_v;
    }

    rep.lower_violations = lower_v;
    rep.upper_violations = upper_v;
    rep.sintheta_violations = sin_v;
    rep.joint_violations = joint_v;
    rep.condition_failures = cond_f;
    rep.wishart_violations = wish_v;
    rep.joint_frequency = static_cast<double>(joint_v) / static_cast<double>(trials);
    rep.wishart_frequency = static_cast<double>(wish_v) / static_cast<double>(trials);
    rep.joint_stderr = std::sqrt(rep.budget / static_cast<double>(trials));
    return rep;
}

std::string coverage_report_to_json(const CoverageReport& r) {
    nlohmann::ordered_json j;
    j["config"] = {{"s1", r.config.s1}, {"s2", r.config.s2}, {"s3", r.config.s3},
                   {"p", r.config.p},   {"n", r.config.n},   {"sigma", r.config.sigma},
                   {"kappa", r.config.kappa}};
    j["trials"] = r.trials;
    j["budget"] = r.budget;
    j["joint_violations"] = r.joint_violations;
    j["joint_frequency"] = r.joint_frequency;
    j["joint_stderr"] = r.joint_stderr;
    j["lower_violations"] = r.lower_violations;
    j["upper_violations"] = r.upper_violations;
    j["sintheta_violations"] = r.sintheta_violations;
    j["condition_failures"] = r.condition_failures;
    j["wishart_violations"] = r.wishart_violations;
    j["wishart_frequency"] = r.wishart_frequency;
    j["wishart_eps"] = r.wishart_eps;
    return j.dump(2);
}

MomentReport moment_experiment(const SpikedModel& model, std::size_t n, const Vector& sigma_list,
                               std::size_t trials, std::uint64_t seed) {
    if (trials < 2) throw PreconditionError("moment_experiment: trials must be >= 2");
    MomentReport rep;
    rep.rows.reserve(sigma_list.size());

    for (std::size_t g = 0; g < sigma_list.size(); ++g) {
        const double sigma = sigma_list[g];
        SpikedModel m = model;
        m.noise_level = sigma;

        Vector lambdas(trials), sinthetas(trials);
        const std::int64_t nt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t t = 0; t < nt; ++t) {
            const SampleRealization real = sample_model_stream(
                m, n, seed, rng::stream_id(g, static_cast<std::uint64_t>(t)));
            const TopSpectrum top =
                sample_top_two(real.samples, 1.0 / static_cast<double>(n),
                               rng::stream_id(1000 + g, static_cast<std::uint64_t>(t)));
            lambdas[t] = top.lambda1;
            const double overlap = std::fabs(top.v1[0]);
            sinthetas[t] = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
        }

        MomentRow row;
        row.sigma = sigma;
        row.trials = trials;
        const double nt_d = static_cast<double>(trials);
        double s1 = 0.0, s1s = 0.0;
        for (double v : lambdas) s1 += v;
        row.emp_mean_lambda = s1 / nt_d;
        double m2 = 0.0, m4 = 0.0;
        for (double v : lambdas) {
            const double d = v - row.emp_mean_lambda;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        row.emp_var_lambda = m2 / (nt_d - 1.0);
        m2 /= nt_d;
        m4 /= nt_d;
        row.se_mean_lambda = std::sqrt(row.emp_var_lambda / nt_d);
        row.se_var_lambda = std::sqrt(std::max(0.0, m4 - m2 * m2) / nt_d);
        for (double v : sinthetas) s1s += v;
        row.emp_mean_sintheta = s1s / nt_d;
        double vs = 0.0;
        for (double v : sinthetas) vs += (v - row.emp_mean_sintheta) * (v - row.emp_mean_sintheta);
        row.se_mean_sintheta = std::sqrt(vs / (nt_d - 1.0) / nt_d);

        const LambdaMoments lm = lambda_moments(m, n);
        row.pred_mean_lambda = lm.mean;
        row.pred_var_printed = lm.variance_printed;
        row.pred_var_girshick = lm.variance_girshick;
        if (model.signal_norm > 0.0 && model.dimension >= 2) {
            const SinThetaMoments sm =
                sintheta_moments(model.signal_norm, n, model.dimension, sigma);
            row.pred_mean_sintheta = sm.mean;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::string moment_report_to_json(const MomentReport& r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const MomentRow& row : r.rows) {
        rows.push_back({{"sigma", row.sigma},
                        {"trials", row.trials},
                        {"emp_mean_lambda", row.emp_mean_lambda},
                        {"se_mean_lambda", row.se_mean_lambda},
                        {"emp_var_lambda", row.emp_var_lambda},
                        {"se_var_lambda", row.se_var_lambda},
                        {"emp_mean_sintheta", row.emp_mean_sintheta},
                        {"se_mean_sintheta", row.se_mean_sintheta},
                        {"pred_mean_lambda", row.pred_mean_lambda},
                        {"pred_var_printed", row.pred_var_printed},
                        {"pred_var_girshick", row.pred_var_girshick},
                        {"pred_mean_sintheta", row.pred_mean_sintheta}});
    }
    nlohmann::ordered_json j;
    j["rows"] = rows;
    return j.dump(2);
}

WishartExperiment wishart_experiment(std::size_t p, std::size_t n, std::size_t trials,
                                     std::uint64_t seed) {
    WishartExperiment rep;
    rep.p = p;
    rep.n = n;
    rep.trials = trials;
    const WishartBound wb = wishart_norm_bound(p, n);
    rep.norm_bound = wb.norm_bound;
    rep.eps = wb.eps;

    std::size_t exceed = 0;
    const std::int64_t nt = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic) reduction(+ : exceed)
    for (std::int64_t t = 0; t < nt; ++t) {
        rng::Philox gen(seed, rng::stream_id(0, static_cast<std::uint64_t>(t)));
        Matrix x(n, p);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = x.row(i);
            for (std::size_t j = 0; j < p; ++j) row[j] = gen.normal();
        }
        const double norm = sample_spectral_norm(x, 1.0 / static_cast<double>(n),
                                                 rng::stream_id(1, static_cast<std::uint64_t>(t)));
        if (norm > rep.norm_bound) ++exceed;
    }
    rep.exceedances = exceed;
    rep.frequency = static_cast<double>(exceed) / static_cast<double>(trials);
    return rep;
}

std::string wishart_experiment_to_json(const WishartExperiment& r) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["n"] = r.n;
    j["trials"] = r.trials;
    j["norm_bound"] = r.norm_bound;
    j["eps"] = r.eps;
    j["exceedances"] = r.exceedances;
    j["frequency"] = r.frequency;
    return j.dump(2);
}

}  // namespace spikepca
