#include "spikepca/perturbation.hpp"

#include <cmath>
#include <cstdio>

#include "spikepca/errors.hpp"
#include "spikepca/special.hpp"

namespace spikepca {

Vector TaylorEigenpair::linear_vector_at(double sigma) const {
    Vector v = vector_terms[0];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += sigma * vector_terms[1][i];
    return v;
}

TaylorEigenpair taylor_expand(const CovarianceDecomposition& decomp) {
    if (!(decomp.kappa > 0.0))
        throw DegenerateSignal("taylor_expand: expansion basepoint needs kappa > 0");
    const std::size_t p = decomp.rho.size();
    const double kappa = decomp.kappa;

    TaylorEigenpair t;
    double tail2 = 0.0;
    for (std::size_t j = 1; j < p; ++j) tail2 += decomp.rho[j] * decomp.rho[j];
    t.lambda_terms = {kappa * kappa, 2.0 * kappa * decomp.rho[0], tail2 + decomp.beta(0, 0)};

    t.vector_terms[0].assign(p, 0.0);
    t.vector_terms[0][0] = 1.0;
    t.vector_terms[1].assign(p, 0.0);
    t.vector_terms[2].assign(p, 0.0);
    for (std::size_t j = 1; j < p; ++j) {
        t.vector_terms[1][j] = decomp.rho[j] / kappa;
        t.vector_terms[2][j] =
            (decomp.beta(0, j) - 2.0 * decomp.rho[0] * decomp.rho[j]) / (kappa * kappa);
    }

    if (t.lambda_terms[2] > 0.0) {
        const double sigma_star = std::sqrt(0.5 * t.lambda_terms[0] / t.lambda_terms[2]);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "quadratic term reaches half the constant term at sigma ~ %.3g; "
                      "expansion untrusted beyond that (crossover region)",
                      sigma_star);
        t.radius_note = buf;
    } else {
        t.radius_note = "quadratic term vanishes; expansion trusted for small sigma";
    }
    return t;
}

LambdaMoments lambda_moments(const SpikedModel& model, std::size_t n) {
    const double v2 = model.signal_norm * model.signal_norm;
    const double s2 = model.noise_level * model.noise_level;
    const double p = static_cast<double>(model.dimension);
    const double nn = static_cast<double>(n);
    const double u4 = latent_fourth_moment(model.latent_law);

    LambdaMoments m;
    m.mean = v2 + s2 * (1.0 + (p - 1.0) / nn);
    m.variance_printed = v2 * v2 * u4 / nn + 4.0 * s2 * v2 / nn;
    m.variance_girshick = v2 * v2 * (u4 - 1.0) / nn + 4.0 * s2 * v2 / nn;
    return m;
}

SinThetaMoments sintheta_moments(double kappa, std::size_t n, std::size_t p, double sigma) {
    if (p < 2) throw PreconditionError("sintheta_moments: p must be >= 2");
    if (!(kappa > 0.0)) throw PreconditionError("sintheta_moments: kappa must be positive");
    const double half_p = 0.5 * static_cast<double>(p);
    const double ratio = std::exp(special::lgamma(half_p) - special::lgamma(half_p - 0.5));
    SinThetaMoments m;
    m.mean = sigma / (kappa * std::sqrt(static_cast<double>(n))) * std::sqrt(2.0) * ratio;
    m.variance = sigma * sigma / (2.0 * kappa * kappa * static_cast<double>(n));
    return m;
}

}  // namespace spikepca
