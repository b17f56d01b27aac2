#include "spikepca/special.hpp"

#include <cmath>
#include <limits>

#include "spikepca/errors.hpp"

namespace spikepca::special {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kHalfLn2Pi = 0.91893853320467274178032973640562;

// erf series on [0, 2)
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 80; ++k) {
        term *= -x2 / k;
        const double add = term / (2 * k + 1);
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

// erfc continued fraction for x >= 2 (Lentz):
// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfc_cf(double x) {
    const double tiny = 1e-300;
    double c = 1.0 / tiny;
    double d = 1.0 / x;
    double f = d;
    for (int i = 1; i < 300; ++i) {
        const double an = 0.5 * i;
        d = x + an * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / kSqrtPi * f;
}

const double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double erf(double x) { return 1.0 - erfc(x); }

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < 2.0) return 1.0 - erf_series(x);
    if (x > 27.0) return 0.0;  // below double underflow of exp(-x^2)
    return erfc_cf(x);
}

double lgamma(double z) {
    if (std::isnan(z)) return z;
    if (z < 0.5) {
        // reflection
        return std::log(M_PI / std::fabs(std::sin(M_PI * z))) - lgamma(1.0 - z);
    }
    const double x = z - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + 7.5;  // g + 0.5
    return kHalfLn2Pi + (x + 0.5) * std::log(t) - t + std::log(acc);
}

namespace {

// series for P(a,x), x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 100000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lgamma(a));
}

// continued fraction for Q(a,x), x >= a+1 (modified Lentz)
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw PreconditionError("gamma_p: a must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw PreconditionError("gamma_q: a must be positive");
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double normal_tail_abs(double t) {
    if (!(t >= 0.0)) throw PreconditionError("normal_tail_abs: threshold must be >= 0");
    return erfc(t / 1.4142135623730950488016887242097);
}

double chisq_tail_upper(std::size_t dof, double t) {
    if (dof < 1) throw InvalidDof("chisq_tail_upper: dof must be >= 1");
    if (!(t >= 0.0)) throw PreconditionError("chisq_tail_upper: threshold must be >= 0");
    return gamma_q(0.5 * static_cast<double>(dof), 0.5 * t);
}

double chisq_tail_two_sided_scaled(std::size_t dof, double t) {
    if (dof < 1) throw InvalidDof("chisq_tail_two_sided_scaled: dof must be >= 1");
    if (!(t >= 0.0)) throw PreconditionError("chisq_tail_two_sided_scaled: threshold must be >= 0");
    const double d = static_cast<double>(dof);
    const double sd = std::sqrt(d);
    const double upper = gamma_q(0.5 * d, 0.5 * (d + t * sd));
    const double lo_arg = d - t * sd;
    const double lower = lo_arg > 0.0 ? gamma_p(0.5 * d, 0.5 * lo_arg) : 0.0;
    return upper + lower;
}

namespace {

template <typename F>
double bisect_decreasing(F f, double lo, double hi, double target, int iters = 200) {
    // f decreasing in its argument; find x with f(x) = target
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * (1.0 + std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double invert_normal_tail_abs(double prob) {
    if (!(prob > 0.0 && prob <= 1.0))
        throw PreconditionError("invert_normal_tail_abs: prob must be in (0,1]");
    return bisect_decreasing([](double s) { return normal_tail_abs(s); }, 0.0, 40.0, prob);
}

double invert_chisq_two_sided(std::size_t dof, double prob) {
    if (!(prob > 0.0 && prob <= 1.0))
        throw PreconditionError("invert_chisq_two_sided: prob must be in (0,1]");
    const double hi = 3.0 * std::sqrt(static_cast<double>(dof)) + 60.0;
    return bisect_decreasing(
        [dof](double s) { return chisq_tail_two_sided_scaled(dof, s); }, 0.0, hi, prob);
}

double invert_chisq_upper(std::size_t dof, double prob) {
    if (!(prob > 0.0 && prob <= 1.0))
        throw PreconditionError("invert_chisq_upper: prob must be in (0,1]");
    const double hi = 10.0 * static_cast<double>(dof) + 400.0;
    return bisect_decreasing([dof](double t) { return chisq_tail_upper(dof, t); }, 0.0, hi, prob);
}

}  // namespace spikepca::special
