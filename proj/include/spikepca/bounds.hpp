#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace spikepca {

/// Free deviation parameters and problem size for the finite-sample bounds.
struct BoundConfig {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t p = 0, n = 0;
    double sigma = 0.0;
    double kappa = 0.0;
};

/// s1, s2, s3 chosen so each of the three tail probabilities is `tail_prob`
/// (default 1%, making the budget roughly 3% plus the Wishart epsilon).
BoundConfig default_bound_config(std::size_t p, std::size_t n, double sigma, double kappa,
                                 double tail_prob = 0.01);

enum class TailKind { AbsNormal, ChisqUpper, ChisqTwoSidedScaled };

/// Tail probability of the named kind; dof is ignored for AbsNormal and must
/// be >= 1 otherwise (InvalidDof).
double tail_probability(TailKind kind, std::size_t dof, double threshold);

struct EpsilonBudget {
    double eps = 0.0;   // Wishart-norm failure probability, closed form in p
    double eps1 = 0.0;  // Pr{|N| > s1}
    double eps2 = 0.0;  // two-sided chi-square, dof p-1
    double eps3 = 0.0;  // Pr{chi^2_1 > s3}
    double total() const { return eps + eps1 + eps2 + eps3; }
};

EpsilonBudget epsilon_budget(const BoundConfig& cfg);

/// Signal-above-noise condition gating the eigenvalue bounds.
bool signal_condition(const BoundConfig& cfg);

/// (lower, upper) for the top sample eigenvalue, evaluated exactly as
/// printed. Throws ConditionViolated when signal_condition fails or the
/// cubed denominator factor is nonpositive.
std::pair<double, double> lambda_bounds(const BoundConfig& cfg);

/// Variant with the (1 - 2*sigma*s1/(kappa sqrt n)) factor grouped as a
/// prefactor, as the proof displays it; reported alongside the printed form.
double lambda_lower_grouped_variant(const BoundConfig& cfg);

/// Upper bound on sin(theta) between the top sample eigenvector and e1.
/// Throws ConditionViolated when 1 - 2 sigma s1/(kappa sqrt n) - sigma^2/kappa^2 <= 0.
double sintheta_bound(const BoundConfig& cfg);

/// Eigengap floor: kappa^2 - 2 s1 sigma kappa / sqrt(n) - sigma^2.
double eigengap_lower(const BoundConfig& cfg);

struct WishartBound {
    double norm_bound = 0.0;      // (1+sqrt(p/n))^2 + p/n
    double centered_bound = 0.0;  // 4 p/n
    double eps = 0.0;
};

/// Requires n <= p (RegimeViolation otherwise).
WishartBound wishart_norm_bound(std::size_t p, std::size_t n);

/// Exponential tail for Pr{lambda_W > (1+sqrt(p/n))^2 + alpha*p/n}, n <= p.
double szarek_tail(std::size_t p, std::size_t n, double alpha);

/// Everything evaluated at one config; fields that require a failed
/// precondition are NaN and flagged.
struct BoundReport {
    BoundConfig config;
    double eps = 0.0, eps1 = 0.0, eps2 = 0.0, eps3 = 0.0;
    double budget = 0.0;
    bool condition_holds = false;
    double lambda_lower = 0.0, lambda_upper = 0.0;
    double lambda_lower_grouped = 0.0;
    double sintheta_upper = 0.0;  // NaN when undefined
    bool sintheta_defined = false;
    double eigengap_lower = 0.0;
};

BoundReport evaluate_bounds(const BoundConfig& cfg);
std::string bound_report_to_json(const BoundReport& r);

}  // namespace spikepca
