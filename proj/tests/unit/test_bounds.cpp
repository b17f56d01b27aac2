#include <cmath>

#include "doctest.h"
#include "spikepca/bounds.hpp"
#include "spikepca/errors.hpp"

using namespace spikepca;

namespace {

BoundConfig cfg_at(double kappa, double sigma, std::size_t p, std::size_t n, double s1, double s2,
                   double s3) {
    BoundConfig c;
    c.kappa = kappa;
    c.sigma = sigma;
    c.p = p;
    c.n = n;
    c.s1 = s1;
    c.s2 = s2;
    c.s3 = s3;
    return c;
}

// crude directed-rounding intervals: every arithmetic result widened by a few ulp
struct Iv {
    double lo, hi;
    static Iv point(double v) { return {v, v}; }
    static Iv widen(double v) {
        const double w = std::fabs(v) * 4e-16 + 1e-300;
        return {v - w, v + w};
    }
    Iv operator+(const Iv& o) const { return widen2(lo + o.lo, hi + o.hi); }
    Iv operator-(const Iv& o) const { return widen2(lo - o.hi, hi - o.lo); }
    Iv operator*(const Iv& o) const {
        const double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return widen2(std::min(std::min(a, b), std::min(c, d)),
                      std::max(std::max(a, b), std::max(c, d)));
    }
    static Iv widen2(double a, double b) {
        const double wa = std::fabs(a) * 4e-16 + 1e-300;
        const double wb = std::fabs(b) * 4e-16 + 1e-300;
        return {a - wa, b + wb};
    }
    Iv sqrt_iv() const { return widen2(std::sqrt(lo), std::sqrt(hi)); }
    Iv div(const Iv& o) const {  // o strictly positive
        return widen2(lo / o.hi, hi / o.lo);
    }
};

// interval re-derivation of the signal condition; returns +1 (holds), -1
// (fails) or 0 (undecided)
int interval_signal_condition(const BoundConfig& c) {
    const Iv kappa = Iv::widen(c.kappa), sigma = Iv::widen(c.sigma);
    const Iv n = Iv::point(static_cast<double>(c.n));
    const Iv r = Iv::point(static_cast<double>(c.p - 1)).div(n);
    const Iv lhs = kappa * kappa - Iv::point(2.0) * sigma * Iv::widen(c.s1) * kappa.div(n.sqrt_iv());
    const Iv one = Iv::point(1.0);
    const Iv edge = (one + r.sqrt_iv()) * (one + r.sqrt_iv()) + r;
    const Iv rhs = sigma * sigma * edge;
    if (lhs.lo > rhs.hi) return 1;
    if (lhs.hi < rhs.lo) return -1;
    return 0;
}

}  // namespace

TEST_CASE("epsilon budget at p=200 matches the frozen high-precision value") {
    const BoundConfig c = cfg_at(2.8, 0.5, 200, 50, 2, 2, 4);
    const EpsilonBudget b = epsilon_budget(c);
    CHECK(b.eps == doctest::Approx(0.00379979181193270576).epsilon(1e-13));
    CHECK(b.eps1 == doctest::Approx(0.04550026389635841).epsilon(1e-11));  // Pr|N|>2
    CHECK(b.total() >= b.eps);
}

TEST_CASE("epsilon limits: s1 large kills eps1; p=2 s2=0 makes eps2 one") {
    BoundConfig c = cfg_at(1.0, 0.1, 200, 50, 38.0, 2, 4);
    CHECK(epsilon_budget(c).eps1 == doctest::Approx(0.0).epsilon(1e-30));
    BoundConfig c2 = cfg_at(1.0, 0.1, 2, 2, 2.0, 1e-300, 4);
    CHECK(epsilon_budget(c2).eps2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("signal condition: trivial truths and interval-arithmetic agreement") {
    CHECK(signal_condition(cfg_at(1.0, 0.0, 50, 20, 2, 2, 4)));
    CHECK_FALSE(signal_condition(cfg_at(0.0, 1.0, 50, 20, 2, 2, 4)));

    for (double sigma : {0.1, 0.5, 0.8, 1.0, 1.2, 2.0}) {
        const BoundConfig c = cfg_at(2.8, sigma, 200, 50, 2, 2, 4);
        const int iv = interval_signal_condition(c);
        if (iv != 0) CHECK(signal_condition(c) == (iv > 0));
    }
}

TEST_CASE("lambda bounds at sigma=0 collapse to kappa^2") {
    const auto [lo, hi] = lambda_bounds(cfg_at(1.7, 0.0, 100, 40, 2, 2, 4));
    CHECK(lo == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
    CHECK(hi == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
}

TEST_CASE("lambda and sintheta bounds match the 50-digit oracle to 1e-12") {
    const BoundConfig c = cfg_at(2.8, 0.5, 200, 50, 2, 2, 4);
    const auto [lo, hi] = lambda_bounds(c);
    CHECK(lo == doctest::Approx(7.59703989518213846).epsilon(1e-12));
    CHECK(hi == doctest::Approx(13.166637686113802).epsilon(1e-12));
    CHECK(lambda_lower_grouped_variant(c) == doctest::Approx(7.54158257199278192).epsilon(1e-12));
    CHECK(sintheta_bound(c) == doctest::Approx(1.27997525106150551).epsilon(1e-12));
    CHECK(eigengap_lower(c) == doctest::Approx(6.79804040507106677).epsilon(1e-12));
}

TEST_CASE("leading-order behavior for small sigma") {
    const double kappa = 1.3, s1 = 2.0;
    const std::size_t p = 200, n = 50;
    for (double sigma : {1e-4, 1e-5}) {
        const BoundConfig c = cfg_at(kappa, sigma, p, n, s1, 2, 4);
        const auto [lo, hi] = lambda_bounds(c);
        const double r = static_cast<double>(p - 1) / n;
        // lower ~ kappa^2 (1 - 2 sigma s1/(kappa sqrt n)) + sigma^2 r (1 + O(sigma, 1/sqrt p))
        const double base = kappa * kappa * (1.0 - 2.0 * sigma * s1 / (kappa * std::sqrt(50.0)));
        CHECK(std::fabs(lo - base) < 1.3 * sigma * sigma * r);
        CHECK(hi >= kappa * kappa);
        // sintheta ~ (sigma/kappa) sqrt(r) (1+o(1))
        const double st = sintheta_bound(c);
        CHECK(st == doctest::Approx(sigma / kappa * std::sqrt(r)).epsilon(0.25));
    }
    CHECK(sintheta_bound(cfg_at(1.3, 0.0, 200, 50, 2, 2, 4)) == doctest::Approx(0.0));
}

TEST_CASE("bounds monotonicity in sigma over the valid region") {
    double prev_lo = 1e300, prev_hi = -1e300;
    for (double sigma = 0.05; sigma <= 0.45; sigma += 0.05) {
        const BoundConfig c = cfg_at(2.8, sigma, 200, 50, 2, 2, 4);
        REQUIRE(signal_condition(c));
        const auto [lo, hi] = lambda_bounds(c);
        CHECK(lo <= prev_lo + 1e-12);
        CHECK(hi >= prev_hi - 1e-12);
        prev_lo = lo;
        prev_hi = hi;
    }
}

TEST_CASE("precondition violations throw ConditionViolated") {
    CHECK_THROWS_AS(lambda_bounds(cfg_at(0.5, 1.0, 200, 50, 2, 2, 4)), ConditionViolated);
    // sintheta guard: sigma/kappa = 1 kills 1 - a - sigma^2/kappa^2
    CHECK_THROWS_AS(sintheta_bound(cfg_at(1.0, 1.0, 200, 50, 2, 2, 4)), ConditionViolated);
}

TEST_CASE("wishart norm bounds: plug-in values and regime guard") {
    const WishartBound eq = wishart_norm_bound(64, 64);
    CHECK(eq.norm_bound == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(eq.centered_bound == doctest::Approx(4.0).epsilon(1e-15));

    const WishartBound w = wishart_norm_bound(200, 50);
    CHECK(w.norm_bound == doctest::Approx(13.0).epsilon(1e-14));
    CHECK(w.centered_bound == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(w.eps == doctest::Approx(0.00379979181193270576).epsilon(1e-13));

    // scale-free in p/n
    CHECK(wishart_norm_bound(400, 100).norm_bound == doctest::Approx(13.0).epsilon(1e-14));
    CHECK_THROWS_AS(wishart_norm_bound(50, 200), RegimeViolation);
}

TEST_CASE("szarek tail: alpha=1 identity, monotone vanishing, frozen value") {
    for (std::size_t p : {std::size_t{40}, std::size_t{200}}) {
        const BoundConfig c = cfg_at(1, 1, p, p, 1, 1, 1);
        CHECK(szarek_tail(p, p, 1.0) == doctest::Approx(epsilon_budget(c).eps).epsilon(1e-12));
    }
    CHECK(szarek_tail(200, 100, 1.0) == doctest::Approx(0.000634916550280534196).epsilon(1e-12));
    double prev = 1.0;
    for (std::size_t p = 100; p <= 1600; p *= 2) {
        const double t = szarek_tail(p, p / 2, 1.0);
        CHECK(t < prev);
        prev = t;
    }
    CHECK_THROWS_AS(szarek_tail(50, 100, 1.0), RegimeViolation);
}

TEST_CASE("default config hits one-percent tails and the report serializes") {
    const BoundConfig c = default_bound_config(200, 50, 0.3, 2.8);
    const EpsilonBudget b = epsilon_budget(c);
    CHECK(b.eps1 == doctest::Approx(0.01).epsilon(1e-7));
    CHECK(b.eps2 == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(b.eps3 == doctest::Approx(0.01).epsilon(1e-7));

    const BoundReport r = evaluate_bounds(c);
    CHECK(r.condition_holds);
    CHECK(r.lambda_lower <= r.lambda_upper);
    const std::string j = bound_report_to_json(r);
    CHECK(j.find("\"budget\"") != std::string::npos);
    CHECK(j.find("\"lambda_lower\"") != std::string::npos);

    // an undefined sintheta serializes as null
    const BoundReport r2 = evaluate_bounds(cfg_at(1.0, 1.0, 200, 50, 2, 2, 4));
    CHECK_FALSE(r2.sintheta_defined);
    CHECK(bound_report_to_json(r2).find("\"sintheta_upper\": null") != std::string::npos);
}
