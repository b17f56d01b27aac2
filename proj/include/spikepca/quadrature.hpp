#pragma once

#include <functional>

namespace spikepca::quadrature {

/// Adaptive Simpson with Richardson acceptance. `tol` is an absolute target
/// on the interval; recursion splits it in half per side.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 48);

}  // namespace spikepca::quadrature
