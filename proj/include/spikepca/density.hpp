#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spikepca/linalg.hpp"

namespace spikepca {

/// Population noise-variance density h on a compact support [0, alpha_c]:
/// a point mass, a uniform interval, or a piecewise-linear tabulation
/// (renormalized to mass 1 at construction; moments come from the same
/// representation, so the mass/moment invariants hold by construction).
class NoiseDensity {
  public:
    enum class Kind { PointMass, Uniform, Tabulated };

    static NoiseDensity point_mass(double at);
    static NoiseDensity uniform(double lo, double hi);
    static NoiseDensity tabulated(Vector grid, Vector values);
    /// Two-column CSV: grid point, density value.
    static NoiseDensity from_csv(const std::string& path);

    Kind kind() const noexcept { return kind_; }
    double support_min() const noexcept { return lo_; }
    double support_max() const noexcept { return hi_; }  // alpha_c
    double mu1() const noexcept { return mu1_; }
    double mu2_sq() const noexcept { return mu2_sq_; }

    /// h(t) for the continuous kinds (throws for point mass).
    double value(double t) const;

    /// integral of f(t) h(t) dt over the support; f must be smooth there.
    double integrate(const std::function<double(double)>& f, double tol = 1e-11) const;

    /// closed-form integral of h(t) / (A t - z) dt; NaN if the denominator
    /// crosses zero inside the support.
    double resolvent(double a_coeff, double z) const;

    /// closed-form integral of t h(t) / (1 + t m) dt; NaN on a pole inside
    /// the support.
    double tilted_first_moment(double m) const;

  private:
    NoiseDensity() = default;
    void compute_moments();

    Kind kind_ = Kind::PointMass;
    double lo_ = 0.0, hi_ = 0.0;
    Vector grid_, values_;  // tabulated only
    double mu1_ = 0.0, mu2_sq_ = 0.0;
};

}  // namespace spikepca
