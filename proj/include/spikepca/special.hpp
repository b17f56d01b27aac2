#pragma once

#include <cstddef>

namespace spikepca::special {

// Internal implementations, documented accuracy ~1e-12 relative over the
// ranges this library uses (chi-square dof up to a few thousand). Normal
// tails go through erfc, chi-square tails through the regularized incomplete
// gamma functions, so the two routes stay independent.

/// Complementary error function: power series below 2, continued fraction above.
double erfc(double x);
double erf(double x);

/// log Gamma via a 9-term Lanczos approximation (g = 7), reflection for z < 0.5.
double lgamma(double z);

/// Regularized incomplete gamma P(a,x) (lower) and Q(a,x) (upper).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Pr{ |N(0,1)| > t }
double normal_tail_abs(double t);

/// Pr{ chi^2_dof > t }
double chisq_tail_upper(std::size_t dof, double t);

/// Pr{ |chi^2_dof / dof - 1| > t / sqrt(dof) }
double chisq_tail_two_sided_scaled(std::size_t dof, double t);

/// Smallest s with Pr{|N|>s} = prob (bisection on normal_tail_abs).
double invert_normal_tail_abs(double prob);

/// s2 with chisq_tail_two_sided_scaled(dof, s2) = prob.
double invert_chisq_two_sided(std::size_t dof, double prob);

/// t with chisq_tail_upper(dof, t) = prob.
double invert_chisq_upper(std::size_t dof, double prob);

}  // namespace spikepca::special
