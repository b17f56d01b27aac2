#include "spikepca/bounds.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/special.hpp"

namespace spikepca {

BoundConfig default_bound_config(std::size_t p, std::size_t n, double sigma, double kappa,
                                 double tail_prob) {
    if (p < 2) throw PreconditionError("default_bound_config: p must be >= 2");
    BoundConfig cfg;
    cfg.p = p;
    cfg.n = n;
    cfg.sigma = sigma;
    cfg.kappa = kappa;
    cfg.s1 = special::invert_normal_tail_abs(tail_prob);
    cfg.s2 = special::invert_chisq_two_sided(p - 1, tail_prob);
    cfg.s3 = special::invert_chisq_upper(1, tail_prob);
    return cfg;
}

double tail_probability(TailKind kind, std::size_t dof, double threshold) {
    switch (kind) {
        case TailKind::AbsNormal:
            return special::normal_tail_abs(threshold);
        case TailKind::ChisqUpper:
            if (dof < 1) throw InvalidDof("tail_probability: chi-square kinds need dof >= 1");
            return special::chisq_tail_upper(dof, threshold);
        case TailKind::ChisqTwoSidedScaled:
            if (dof < 1) throw InvalidDof("tail_probability: chi-square kinds need dof >= 1");
            return special::chisq_tail_two_sided_scaled(dof, threshold);
    }
    throw PreconditionError("tail_probability: unknown kind");
}

EpsilonBudget epsilon_budget(const BoundConfig& cfg) {
    if (cfg.p < 2) throw PreconditionError("epsilon_budget: p must be >= 2");
    if (!(cfg.s1 > 0.0 && cfg.s2 >= 0.0 && cfg.s3 > 0.0))
        throw PreconditionError("epsilon_budget: s parameters must be positive");
    EpsilonBudget b;
    const double denom = 2.0 * (std::sqrt(5.0) + 2.0) * (std::sqrt(5.0) + 2.0);
    b.eps = std::exp(-static_cast<double>(cfg.p) / denom);
    b.eps1 = special::normal_tail_abs(cfg.s1);
    b.eps2 = special::chisq_tail_two_sided_scaled(cfg.p - 1, cfg.s2);
    b.eps3 = special::chisq_tail_upper(1, cfg.s3);
    return b;
}

bool signal_condition(const BoundConfig& cfg) {
    const double k = cfg.kappa, s = cfg.sigma;
    const double r = static_cast<double>(cfg.p - 1) / static_cast<double>(cfg.n);
    const double lhs = k * k - 2.0 * s * cfg.s1 * k / std::sqrt(static_cast<double>(cfg.n));
    const double rhs = s * s * ((1.0 + std::sqrt(r)) * (1.0 + std::sqrt(r)) + r);
    return lhs > rhs;
}

namespace {

// shared pieces of the printed bound formulas
struct Pieces {
    double a;      // 2 sigma s1 / (kappa sqrt n)
    double r;      // (p-1)/n
    double sr;     // s2 / sqrt(p-1)
    double kappa2;
};

Pieces pieces(const BoundConfig& cfg) {
    Pieces q;
    q.a = 2.0 * cfg.sigma * cfg.s1 / (cfg.kappa * std::sqrt(static_cast<double>(cfg.n)));
    q.r = static_cast<double>(cfg.p - 1) / static_cast<double>(cfg.n);
    q.sr = cfg.s2 / std::sqrt(static_cast<double>(cfg.p - 1));
    q.kappa2 = cfg.kappa * cfg.kappa;
    return q;
}

double lower_bracket(const BoundConfig& cfg, const Pieces& q) {
    const double s_over_k = cfg.sigma / cfg.kappa;
    const double t2 = s_over_k * s_over_k * q.r * (1.0 - q.sr) / (1.0 + q.a);
    const double t3 = std::pow(s_over_k, 4) * q.r * q.r * (1.0 + q.sr) * (1.0 + q.sr) /
                      std::pow(1.0 - q.a, 3);
    return t2 - t3;
}

}  // namespace

std::pair<double, double> lambda_bounds(const BoundConfig& cfg) {
    if (!signal_condition(cfg))
        throw ConditionViolated("lambda_bounds: signal condition fails at this config");
    const Pieces q = pieces(cfg);
    if (!(1.0 - q.a > 0.0))
        throw ConditionViolated("lambda_bounds: 1 - 2 sigma s1/(kappa sqrt n) must be positive");

    const double lower = q.kappa2 * (1.0 - q.a + lower_bracket(cfg, q));

    const double core = 1.0 + q.a + cfg.sigma * cfg.sigma * cfg.s3 / q.kappa2;
    const double upper = q.kappa2 * core + cfg.sigma * cfg.kappa * std::sqrt(q.r) *
                                               std::sqrt(core) * (1.0 + q.sr);
    return {lower, upper};
}

double lambda_lower_grouped_variant(const BoundConfig& cfg) {
    const Pieces q = pieces(cfg);
    if (!(1.0 - q.a > 0.0))
        throw ConditionViolated("lambda_lower_grouped_variant: nonpositive denominator factor");
    return q.kappa2 * (1.0 - q.a) * (1.0 + lower_bracket(cfg, q));
}

double sintheta_bound(const BoundConfig& cfg) {
    const Pieces q = pieces(cfg);
    const double s_over_k = cfg.sigma / cfg.kappa;
    const double guard = 1.0 - q.a - s_over_k * s_over_k;
    if (!(guard > 0.0))
        throw ConditionViolated("sintheta_bound: 1 - 2 sigma s1/(kappa sqrt n) - sigma^2/kappa^2 "
                                "must be positive");
    const double first = s_over_k * std::sqrt(q.r) * (1.0 + q.a) * (1.0 + q.sr);
    const double second = 4.0 * std::sqrt(2.0) * s_over_k * s_over_k *
                          (static_cast<double>(cfg.p) / static_cast<double>(cfg.n)) / guard;
    return first + second;
}

double eigengap_lower(const BoundConfig& cfg) {
    return cfg.kappa * cfg.kappa -
           2.0 * cfg.s1 * cfg.sigma * cfg.kappa / std::sqrt(static_cast<double>(cfg.n)) -
           cfg.sigma * cfg.sigma;
}

WishartBound wishart_norm_bound(std::size_t p, std::size_t n) {
    if (n > p) throw RegimeViolation("wishart_norm_bound: requires n <= p");
    if (n < 1 || p < 1) throw PreconditionError("wishart_norm_bound: p, n must be positive");
    WishartBound w;
    const double c = static_cast<double>(p) / static_cast<double>(n);
    w.norm_bound = (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c)) + c;
    w.centered_bound = 4.0 * c;
    const double denom = 2.0 * (std::sqrt(5.0) + 2.0) * (std::sqrt(5.0) + 2.0);
    w.eps = std::exp(-static_cast<double>(p) / denom);
    return w;
}

double szarek_tail(std::size_t p, std::size_t n, double alpha) {
    if (n > p) throw RegimeViolation("szarek_tail: requires n <= p");
    if (!(alpha > 0.0)) throw PreconditionError("szarek_tail: alpha must be positive");
    const double q = std::sqrt(static_cast<double>(n) / static_cast<double>(p));
    const double root = std::sqrt(alpha + (1.0 + q) * (1.0 + q)) - (1.0 + q);
    return std::exp(-0.5 * static_cast<double>(p) * root * root);
}

BoundReport evaluate_bounds(const BoundConfig& cfg) {
    BoundReport r;
    r.config = cfg;
    const EpsilonBudget b = epsilon_budget(cfg);
    r.eps = b.eps;
    r.eps1 = b.eps1;
    r.eps2 = b.eps2;
    r.eps3 = b.eps3;
    r.budget = b.total();
    r.condition_holds = signal_condition(cfg);
    r.eigengap_lower = eigengap_lower(cfg);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.lambda_lower = r.lambda_upper = r.lambda_lower_grouped = r.sintheta_upper = nan;
    if (r.condition_holds) {
        try {
            const auto [lo, hi] = lambda_bounds(cfg);
            r.lambda_lower = lo;
            r.lambda_upper = hi;
            r.lambda_lower_grouped = lambda_lower_grouped_variant(cfg);
        } catch (const ConditionViolated&) {
        }
    }
    try {
        r.sintheta_upper = sintheta_bound(cfg);
        r.sintheta_defined = true;
    } catch (const ConditionViolated&) {
        r.sintheta_defined = false;
    }
    return r;
}

std::string bound_report_to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["config"] = {{"s1", r.config.s1}, {"s2", r.config.s2}, {"s3", r.config.s3},
                   {"p", r.config.p},   {"n", r.config.n},   {"sigma", r.config.sigma},
                   {"kappa", r.config.kappa}};
    j["eps"] = r.eps;
    j["eps1"] = r.eps1;
    j["eps2"] = r.eps2;
    j["eps3"] = r.eps3;
    j["budget"] = r.budget;
    j["condition_holds"] = r.condition_holds;
    auto put = [&j](const char* key, double v) {
        if (std::isnan(v))
            j[key] = nullptr;
        else
            j[key] = v;
    };
    put("lambda_lower", r.lambda_lower);
    put("lambda_upper", r.lambda_upper);
    put("lambda_lower_grouped", r.lambda_lower_grouped);
    put("sintheta_upper", r.sintheta_upper);
    j["sintheta_defined"] = r.sintheta_defined;
    j["eigengap_lower"] = r.eigengap_lower;
    return j.dump(2);
}

}  // namespace spikepca
