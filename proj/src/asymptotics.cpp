#include "spikepca/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/quadrature.hpp"

namespace spikepca {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

double mp_edge_low(double c) {
    const double s = std::sqrt(c);
    return (1.0 - s) * (1.0 - s);
}

double mp_edge_high(double c) {
    const double s = std::sqrt(c);
    return (1.0 + s) * (1.0 + s);
}

double mp_density(double c, double x) {
    if (!(c > 0.0)) throw PreconditionError("mp_density: c must be positive");
    const double a = mp_edge_low(c), b = mp_edge_high(c);
    if (x <= a || x >= b) return 0.0;
    return std::sqrt((b - x) * (x - a)) / (2.0 * kPi * x * c);
}

double mp_zero_mass(double c) { return c > 1.0 ? 1.0 - 1.0 / c : 0.0; }

double mp_integral(double c, const std::function<double(double)>& f, double tol) {
    if (!(c > 0.0)) throw PreconditionError("mp_integral: c must be positive");
    const double a = mp_edge_low(c), b = mp_edge_high(c);
    const double width = b - a;
    // x = a + (b-a) sin^2 t turns the edge square roots into smooth factors;
    // for c = 1 (a = 0) the 1/x pole cancels analytically.
    auto integrand = [&](double t) {
        const double s = std::sin(t), cos_t = std::cos(t);
        const double s2 = s * s;
        const double x = a + width * s2;
        double weight;
        if (a == 0.0) {
            weight = width * 4.0 * cos_t * cos_t / (4.0 * kPi * c);
        } else {
            weight = width * width * 4.0 * s2 * cos_t * cos_t / (4.0 * kPi * c * x);
        }
        return weight * f(x);
    };
    return quadrature::adaptive_simpson(integrand, 0.0, 0.5 * kPi, tol);
}

double mp_lambda_functional(double c, double lam) {
    const double b = mp_edge_high(c);
    if (!(lam > b)) throw BulkViolation("mp_lambda_functional: lambda must lie above the bulk");
    return mp_integral(c, [&](double x) { return x / (lam - x); });
}

double mp_lambda_functional_closed_c1(double lam) {
    if (!(lam >= 4.0))
        throw BulkViolation("mp_lambda_functional_closed_c1: lambda must be >= 4");
    return 0.5 * (lam - 2.0 - std::sqrt(lam * (lam - 4.0)));
}

AsymptoticPrediction phase_prediction(double signal_norm, double sigma, double c) {
    if (!(signal_norm > 0.0)) throw PreconditionError("phase_prediction: signal_norm > 0 required");
    if (!(sigma > 0.0)) throw PreconditionError("phase_prediction: sigma > 0 required");
    if (!(c > 0.0)) throw PreconditionError("phase_prediction: c > 0 required");
    AsymptoticPrediction pred;
    pred.c = c;
    const double v2 = signal_norm * signal_norm;
    const double s2 = sigma * sigma;
    pred.threshold_ratio = (s2 * s2) / (v2 * v2);
    pred.above_threshold = 1.0 / c >= pred.threshold_ratio;
    if (pred.above_threshold) {
        pred.lambda_limit = (v2 + s2) * (1.0 + c * s2 / v2);
        const double t = v2 * v2 / (c * s2 * s2);  // n||v||^4 / (p sigma^4)
        pred.overlap_sq = (t - 1.0) / (t + v2 / s2);
    } else {
        pred.lambda_limit = s2 * mp_edge_high(c);
        pred.overlap_sq = 0.0;
    }
    return pred;
}

std::string prediction_to_json(const AsymptoticPrediction& p) {
    nlohmann::ordered_json j;
    j["c"] = p.c;
    j["lambda_limit"] = p.lambda_limit;
    j["overlap_sq"] = p.overlap_sq;
    j["above_threshold"] = p.above_threshold;
    j["threshold_ratio"] = p.threshold_ratio;
    return j.dump(2);
}

double heuristic_threshold(double kappa, double sigma) {
    if (!(sigma > 0.0)) throw PreconditionError("heuristic_threshold: sigma must be positive");
    const double r = kappa / sigma;
    return 0.25 * r * r * r * r;
}

double lawley_shift(const Vector& alphas, std::size_t n, std::size_t k) {
    if (k < 1 || k > alphas.size()) throw PreconditionError("lawley_shift: index out of range");
    if (n < 1) throw PreconditionError("lawley_shift: n must be positive");
    const double ak = alphas[k - 1];
    double acc = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (i == k - 1) continue;
        if (alphas[i] == ak)
            throw DegenerateSpectrum("lawley_shift: alpha_k collides with another eigenvalue");
        acc += alphas[i] / (ak - alphas[i]);
    }
    return ak + ak / static_cast<double>(n) * acc;
}

double spike_transform(double alpha, double c, const NoiseDensity& h) {
    if (!(alpha > h.support_max()))
        throw SupportViolation("spike_transform: alpha must exceed the support of h");
    if (h.kind() == NoiseDensity::Kind::PointMass) {
        const double t = h.support_max();
        return alpha + c * alpha * t / (alpha - t);
    }
    const double integral = h.integrate([&](double rho) { return rho / (alpha - rho); });
    return alpha + c * alpha * integral;
}

double spike_transform_derivative(double alpha, double c, const NoiseDensity& h) {
    if (!(alpha > h.support_max()))
        throw SupportViolation("spike_transform_derivative: alpha must exceed the support of h");
    if (h.kind() == NoiseDensity::Kind::PointMass) {
        const double t = h.support_max();
        return 1.0 - c * t * t / ((alpha - t) * (alpha - t));
    }
    const double integral =
        h.integrate([&](double rho) { return rho * rho / ((alpha - rho) * (alpha - rho)); });
    return 1.0 - c * integral;
}

NoiseNormLimit noise_norm_limit(double c, const NoiseDensity& h) {
    if (!(c > 0.0)) throw PreconditionError("noise_norm_limit: c must be positive");
    const double ac = h.support_max();
    if (!(ac > 0.0)) throw PreconditionError("noise_norm_limit: degenerate support");
    double lo = ac * (1.0 + 1e-6);
    double hi = ac * (1.0 + std::sqrt(c)) * 10.0;
    double dlo = spike_transform_derivative(lo, c, h);
    if (dlo >= 0.0)
        throw RootNotFound("noise_norm_limit: dT/dalpha has no sign change above the support");
    double dhi = spike_transform_derivative(hi, c, h);
    for (int expand = 0; expand < 8 && dhi <= 0.0; ++expand) {
        hi *= 4.0;
        dhi = spike_transform_derivative(hi, c, h);
    }
    if (dhi <= 0.0) throw RootNotFound("noise_norm_limit: no stationary point inside the bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d = spike_transform_derivative(mid, c, h);
        if (d < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    NoiseNormLimit out;
    out.alpha_star = 0.5 * (lo + hi);
    out.norm = spike_transform(out.alpha_star, c, h);
    return out;
}

Corollary3Approx corollary3_approx(double c, const NoiseDensity& h) {
    Corollary3Approx a;
    const double mu1 = h.mu1();
    const double r = h.mu2_sq() / (mu1 * mu1);
    const double root = std::sqrt(1.0 + r);
    a.alpha_star_approx = mu1 * (std::sqrt(c) * root + 1.0 + 4.0 * r / (1.0 + 2.0 * r));
    a.norm_approx = mu1 * (c + 2.0 * std::sqrt(c) * root);
    a.regime_ok = c >= 10.0;
    return a;
}

double stieltjes_inverse(double m_bar, double c, const NoiseDensity& h) {
    if (m_bar == 0.0) throw PreconditionError("stieltjes_inverse: m_bar must be nonzero");
    return -1.0 / m_bar + c * h.tilted_first_moment(m_bar);
}

StieltjesState stieltjes_solve(double z, double c, const NoiseDensity& h) {
    const NoiseNormLimit edge = noise_norm_limit(c, h);
    if (!(z > edge.norm))
        throw SupportViolation("stieltjes_solve: z must lie strictly above the support");

    // self-consistent equation m = integral h(t)/(t(1-c-c z m) - z) dt; the
    // c z m coupling is what makes the companion relation and the inverse
    // equation exact for every aspect ratio
    auto rhs = [&](double m) { return h.resolvent(1.0 - c - c * m * z, z); };

    double m = -1.0 / z;
    double gamma = 1.0;
    double resid = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < 4000; ++it) {
        const double target = rhs(m);
        if (!std::isfinite(target)) {
            gamma *= 0.5;
            m = -1.0 / z;  // restart closer to the large-z asymptote
            if (gamma < 1e-6) break;
            continue;
        }
        const double new_resid = std::fabs(target - m);
        if (new_resid > resid * 1.000001) gamma = std::max(0.05, gamma * 0.7);
        resid = new_resid;
        m = (1.0 - gamma) * m + gamma * target;
        if (resid <= 1e-13 * std::max(1.0, std::fabs(m))) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        // monotone inverse-equation bisection: z(m_bar) increases from the
        // support edge (m_bar = -1/alpha*) to +inf (m_bar -> 0-)
        double lo = -1.0 / edge.alpha_star * (1.0 - 1e-12);
        double hi = -1e-18;
        for (int it = 0; it < 300; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double zm = stieltjes_inverse(mid, c, h);
            if (std::isfinite(zm) && zm < z)
                hi = mid;
            else
                lo = mid;
            if (hi - lo <= 1e-16 * std::fabs(lo)) break;
        }
        const double m_bar = 0.5 * (lo + hi);
        m = (m_bar + (1.0 - c) / z) / c;
        const double check = rhs(m);
        if (!std::isfinite(check) || std::fabs(check - m) > 1e-10)
            throw NoConvergence("stieltjes_solve: fixed point not resolved");
    }

    StieltjesState st;
    st.z = z;
    st.m = m;
    st.m_bar = -(1.0 - c) / z + c * m;
    return st;
}

double overlap_functional(double signal_norm, double sigma, double c) {
    if (!(signal_norm > 0.0 && sigma > 0.0 && c > 0.0))
        throw PreconditionError("overlap_functional: positive parameters required");
    const double v2 = signal_norm * signal_norm / (sigma * sigma);  // sigma-normalized units
    const double threshold = v2 * v2 / c;                           // n||v||^4/(p sigma^4)
    if (threshold < 1.0)
        throw BulkViolation("overlap_functional: below the phase transition");
    if (threshold == 1.0) return 0.0;
    const double alpha = v2 + 1.0;
    const double lam = alpha + c * alpha / (alpha - 1.0);
    const double integral = mp_integral(c, [&](double mu) {
        const double d = lam - mu;
        return mu / (d * d);
    });
    return 1.0 / (1.0 + c * alpha * integral);
}

}  // namespace spikepca
