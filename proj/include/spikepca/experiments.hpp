#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikepca/bounds.hpp"
#include "spikepca/model.hpp"

namespace spikepca {

/// Empirical validation of the finite-sample bounds. Each trial evaluates
/// the bounds at its own realized kappa = ||v|| s_u (the theorem conditions
/// on the latent realizations); cfg.kappa gates the upfront feasibility
/// check. Joint violations cover the eigenvalue interval and the sin(theta)
/// bound; the Wishart-norm exceedance is tracked against its own epsilon.
struct CoverageReport {
    BoundConfig config;
    std::size_t trials = 0;
    std::size_t lower_violations = 0;
    std::size_t upper_violations = 0;
    std::size_t sintheta_violations = 0;
    std::size_t joint_violations = 0;
    std::size_t condition_failures = 0;
    std::size_t wishart_violations = 0;
    double budget = 0.0;
    double joint_frequency = 0.0;
    double wishart_frequency = 0.0;
    double wishart_eps = 0.0;
    double joint_stderr = 0.0;
};

CoverageReport coverage_experiment(const BoundConfig& cfg, const SpikedModel& model,
                                   std::size_t trials, std::uint64_t seed);
std::string coverage_report_to_json(const CoverageReport& r);

/// Small-sigma moment validation: empirical mean/variance of the top
/// eigenvalue and mean sin(theta) against the closed forms, with Monte Carlo
/// standard errors and both variance readings.
struct MomentRow {
    double sigma = 0.0;
    std::size_t trials = 0;
    double emp_mean_lambda = 0.0, se_mean_lambda = 0.0;
    double emp_var_lambda = 0.0, se_var_lambda = 0.0;
    double emp_mean_sintheta = 0.0, se_mean_sintheta = 0.0;
    double pred_mean_lambda = 0.0;
    double pred_var_printed = 0.0;
    double pred_var_girshick = 0.0;
    double pred_mean_sintheta = 0.0;
};

struct MomentReport {
    std::vector<MomentRow> rows;
};

MomentReport moment_experiment(const SpikedModel& model, std::size_t n, const Vector& sigma_list,
                               std::size_t trials, std::uint64_t seed);
std::string moment_report_to_json(const MomentReport& r);

/// Pure-noise Wishart norm exceedance experiment.
struct WishartExperiment {
    std::size_t p = 0, n = 0, trials = 0;
    double norm_bound = 0.0;
    double eps = 0.0;
    std::size_t exceedances = 0;
    double frequency = 0.0;
};

WishartExperiment wishart_experiment(std::size_t p, std::size_t n, std::size_t trials,
                                     std::uint64_t seed);
std::string wishart_experiment_to_json(const WishartExperiment& r);

}  // namespace spikepca
