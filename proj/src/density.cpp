#include "spikepca/density.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "spikepca/errors.hpp"
#include "spikepca/quadrature.hpp"

namespace spikepca {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

NoiseDensity NoiseDensity::point_mass(double at) {
    if (!(at >= 0.0)) throw PreconditionError("NoiseDensity: support must lie in [0, inf)");
    NoiseDensity d;
    d.kind_ = Kind::PointMass;
    d.lo_ = d.hi_ = at;
    d.mu1_ = at;
    d.mu2_sq_ = 0.0;
    return d;
}

NoiseDensity NoiseDensity::uniform(double lo, double hi) {
    if (!(0.0 <= lo && lo < hi)) throw PreconditionError("NoiseDensity: need 0 <= lo < hi");
    NoiseDensity d;
    d.kind_ = Kind::Uniform;
    d.lo_ = lo;
    d.hi_ = hi;
    d.mu1_ = 0.5 * (lo + hi);
    d.mu2_sq_ = (hi - lo) * (hi - lo) / 12.0;
    return d;
}

NoiseDensity NoiseDensity::tabulated(Vector grid, Vector values) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw PreconditionError("NoiseDensity: tabulation needs matching grids, size >= 2");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw PreconditionError("NoiseDensity: grid must be strictly ascending");
    if (!(grid.front() >= 0.0)) throw PreconditionError("NoiseDensity: support must be >= 0");
    for (double v : values)
        if (!(v >= 0.0)) throw PreconditionError("NoiseDensity: density values must be >= 0");

    NoiseDensity d;
    d.kind_ = Kind::Tabulated;
    d.grid_ = std::move(grid);
    d.values_ = std::move(values);
    d.lo_ = d.grid_.front();
    d.hi_ = d.grid_.back();
    // renormalize (trapezoid-exact for the piecewise-linear representation)
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < d.grid_.size(); ++i)
        mass += 0.5 * (d.values_[i] + d.values_[i + 1]) * (d.grid_[i + 1] - d.grid_[i]);
    if (!(mass > 0.0)) throw PreconditionError("NoiseDensity: zero mass tabulation");
    for (double& v : d.values_) v /= mass;
    d.compute_moments();
    return d;
}

NoiseDensity NoiseDensity::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open density csv: " + path);
    Vector grid, values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream row(line);
        double g, v;
        if (row >> g >> v) {
            grid.push_back(g);
            values.push_back(v);
        }
    }
    return tabulated(std::move(grid), std::move(values));
}

void NoiseDensity::compute_moments() {
    // exact per-cell integrals of the piecewise-linear density
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double x0 = grid_[i], x1 = grid_[i + 1];
        const double y0 = values_[i], y1 = values_[i + 1];
        const double slope = (y1 - y0) / (x1 - x0);
        const double icpt = y0 - slope * x0;  // h(t) = icpt + slope*t on the cell
        auto ipow = [&](int k) {
            return (std::pow(x1, k + 1) - std::pow(x0, k + 1)) / static_cast<double>(k + 1);
        };
        m1 += icpt * ipow(1) + slope * ipow(2);
        m2 += icpt * ipow(2) + slope * ipow(3);
    }
    mu1_ = m1;
    mu2_sq_ = m2 - m1 * m1;
}

double NoiseDensity::value(double t) const {
    switch (kind_) {
        case Kind::PointMass:
            throw PreconditionError("NoiseDensity::value: point mass has no density");
        case Kind::Uniform:
            return (t >= lo_ && t <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
        case Kind::Tabulated: {
            if (t < lo_ || t > hi_) return 0.0;
            std::size_t i = 0;
            while (i + 2 < grid_.size() && grid_[i + 1] < t) ++i;
            const double x0 = grid_[i], x1 = grid_[i + 1];
            const double w = (t - x0) / (x1 - x0);
            return values_[i] * (1.0 - w) + values_[i + 1] * w;
        }
    }
    return 0.0;
}

double NoiseDensity::integrate(const std::function<double(double)>& f, double tol) const {
    switch (kind_) {
        case Kind::PointMass:
            return f(lo_);
        case Kind::Uniform: {
            const double w = 1.0 / (hi_ - lo_);
            return quadrature::adaptive_simpson([&](double t) { return w * f(t); }, lo_, hi_, tol);
        }
        case Kind::Tabulated: {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
                const double x0 = grid_[i], x1 = grid_[i + 1];
                const double y0 = values_[i], y1 = values_[i + 1];
                acc += quadrature::adaptive_simpson(
                    [&](double t) {
                        const double w = (t - x0) / (x1 - x0);
                        return (y0 * (1.0 - w) + y1 * w) * f(t);
                    },
                    x0, x1, tol / static_cast<double>(grid_.size()));
            }
            return acc;
        }
    }
    return 0.0;
}

double NoiseDensity::resolvent(double a_coeff, double z) const {
    auto den = [&](double t) { return a_coeff * t - z; };
    switch (kind_) {
        case Kind::PointMass: {
            const double d = den(lo_);
            return d == 0.0 ? kNan : 1.0 / d;
        }
        case Kind::Uniform: {
            const double d0 = den(lo_), d1 = den(hi_);
            if (d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) return kNan;
            if (a_coeff == 0.0) return -1.0 / z;
            return std::log(d1 / d0) / (a_coeff * (hi_ - lo_));
        }
        case Kind::Tabulated: {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
                const double x0 = grid_[i], x1 = grid_[i + 1];
                const double d0 = den(x0), d1 = den(x1);
                if (d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) return kNan;
                const double y0 = values_[i], y1 = values_[i + 1];
                const double slope = (y1 - y0) / (x1 - x0);
                const double icpt = y0 - slope * x0;
                if (a_coeff == 0.0) {
                    acc += -(icpt * (x1 - x0) + 0.5 * slope * (x1 * x1 - x0 * x0)) / z;
                } else {
                    // integral of (icpt + slope t)/(A t - z) dt
                    acc += slope * (x1 - x0) / a_coeff +
                           (icpt * a_coeff + slope * z) / (a_coeff * a_coeff) * std::log(d1 / d0);
                }
            }
            return acc;
        }
    }
    return kNan;
}

double NoiseDensity::tilted_first_moment(double m) const {
    if (std::fabs(m) < 1e-14) return mu1_;
    auto den = [&](double t) { return 1.0 + t * m; };
    switch (kind_) {
        case Kind::PointMass: {
            const double d = den(lo_);
            return d == 0.0 ? kNan : lo_ / d;
        }
        case Kind::Uniform: {
            const double d0 = den(lo_), d1 = den(hi_);
            if (d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) return kNan;
            // (1/(hi-lo)) ((1+tm) - ln(1+tm))/m^2 evaluated across the cell
            const double val = ((d1 - std::log(std::fabs(d1))) - (d0 - std::log(std::fabs(d0)))) /
                               (m * m);
            return val / (hi_ - lo_);
        }
        case Kind::Tabulated: {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
                const double x0 = grid_[i], x1 = grid_[i + 1];
                const double d0 = den(x0), d1 = den(x1);
                if (d0 == 0.0 || d1 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) return kNan;
                const double y0 = values_[i], y1 = values_[i + 1];
                const double slope = (y1 - y0) / (x1 - x0);
                const double icpt = y0 - slope * x0;
                const double logr = std::log(d1 / d0);
                // icpt * integral t/(1+tm) + slope * integral t^2/(1+tm)
                const double i1 = ((x1 - x0) - logr / m) / m;
                const double i2 = (0.5 * m * (x1 * x1 - x0 * x0) - (x1 - x0) + logr / m) / (m * m);
                acc += icpt * i1 + slope * i2;
            }
            return acc;
        }
    }
    return kNan;
}

}  // namespace spikepca
