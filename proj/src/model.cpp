#include "spikepca/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "spikepca/errors.hpp"

namespace spikepca {

double latent_fourth_moment(LatentLaw law) noexcept {
    switch (law) {
        case LatentLaw::Gaussian: return 3.0;
        case LatentLaw::Rademacher: return 1.0;
        case LatentLaw::UniformUnitVariance: return 1.8;  // E{(sqrt3*(2U-1))^4} = 9/5
    }
    return 3.0;
}

double draw_latent(rng::Philox& gen, LatentLaw law) noexcept {
    switch (law) {
        case LatentLaw::Gaussian: return gen.normal();
        case LatentLaw::Rademacher: return gen.rademacher();
        case LatentLaw::UniformUnitVariance: return gen.uniform_unit_variance();
    }
    return gen.normal();
}

std::string latent_law_name(LatentLaw law) {
    switch (law) {
        case LatentLaw::Gaussian: return "gaussian";
        case LatentLaw::Rademacher: return "rademacher";
        case LatentLaw::UniformUnitVariance: return "uniform";
    }
    return "gaussian";
}

LatentLaw latent_law_from_name(const std::string& name) {
    if (name == "gaussian") return LatentLaw::Gaussian;
    if (name == "rademacher") return LatentLaw::Rademacher;
    if (name == "uniform") return LatentLaw::UniformUnitVariance;
    throw PreconditionError("unknown latent law: " + name);
}

SpikedModel::SpikedModel(double signal_norm_, double noise_level_, std::size_t dimension_,
                         LatentLaw law)
    : signal_norm(signal_norm_), noise_level(noise_level_), dimension(dimension_), latent_law(law) {
    if (!(signal_norm >= 0.0)) throw PreconditionError("signal_norm must be nonnegative");
    if (!(noise_level >= 0.0)) throw PreconditionError("noise_level must be nonnegative");
    if (dimension < 1) throw PreconditionError("dimension must be positive");
}

Matrix SpikedModel::population_covariance() const {
    Matrix s(dimension, dimension);
    for (std::size_t i = 0; i < dimension; ++i) s(i, i) = noise_level * noise_level;
    s(0, 0) += signal_norm * signal_norm;
    return s;
}

SampleRealization sample_model(const SpikedModel& model, std::size_t n, std::uint64_t seed) {
    return sample_model_stream(model, n, seed, 0);
}

SampleRealization sample_model_stream(const SpikedModel& model, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) throw PreconditionError("sample_model: n must be >= 1");
    const std::size_t p = model.dimension;
    SampleRealization real;
    real.n = n;
    real.seed = seed;
    real.latents_u.assign(n, 0.0);
    real.latents_xi = Matrix(n, p);
    real.samples = Matrix(n, p);

    rng::Philox gen(seed, stream);
    for (std::size_t nu = 0; nu < n; ++nu) {
        const double u = draw_latent(gen, model.latent_law);
        real.latents_u[nu] = u;
        double* xi = real.latents_xi.row(nu);
        double* x = real.samples.row(nu);
        for (std::size_t j = 0; j < p; ++j) xi[j] = gen.normal();
        x[0] = u * model.signal_norm + model.noise_level * xi[0];
        for (std::size_t j = 1; j < p; ++j) x[j] = model.noise_level * xi[j];
    }
    return real;
}

Matrix sample_covariance(const SampleRealization& real, bool mean_center) {
    if (real.n < 1) throw PreconditionError("sample_covariance: empty realization");
    if (!mean_center) return linalg::gram(real.samples, 1.0 / static_cast<double>(real.n));
    const std::size_t n = real.samples.rows(), p = real.samples.cols();
    Vector mean(p, 0.0);
    for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t j = 0; j < p; ++j) mean[j] += real.samples(nu, j);
    for (double& m : mean) m /= static_cast<double>(n);
    Matrix centered = real.samples;
    for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t j = 0; j < p; ++j) centered(nu, j) -= mean[j];
    return linalg::gram(centered, 1.0 / static_cast<double>(n));
}

CovarianceDecomposition decompose_covariance(const SampleRealization& real,
                                             const SpikedModel& model) {
    const std::size_t n = real.n, p = real.latents_xi.cols();
    if (model.signal_norm <= 0.0)
        throw DegenerateSignal("decompose_covariance: signal_norm must be positive");
    double su2 = 0.0;
    for (double u : real.latents_u) su2 += u * u;
    su2 /= static_cast<double>(n);
    if (su2 <= 0.0) throw DegenerateSignal("decompose_covariance: all latents are zero (s_u = 0)");

    CovarianceDecomposition d;
    d.s_u = std::sqrt(su2);
    d.kappa = model.signal_norm * d.s_u;

    d.rho.assign(p, 0.0);
    for (std::size_t nu = 0; nu < n; ++nu) {
        const double u = real.latents_u[nu];
        const double* xi = real.latents_xi.row(nu);
        for (std::size_t j = 0; j < p; ++j) d.rho[j] += u * xi[j];
    }
    const double rho_scale = 1.0 / (static_cast<double>(n) * d.s_u);
    for (double& r : d.rho) r *= rho_scale;

    d.beta = linalg::gram(real.latents_xi, 1.0 / static_cast<double>(n));

    d.L0 = Matrix(p, p);
    d.L0(0, 0) = d.kappa * d.kappa;
    d.L1 = Matrix(p, p);
    d.L1(0, 0) = 2.0 * d.kappa * d.rho[0];
    for (std::size_t j = 1; j < p; ++j) {
        d.L1(0, j) = d.kappa * d.rho[j];
        d.L1(j, 0) = d.kappa * d.rho[j];
    }
    d.L2 = d.beta;
    return d;
}

void write_realization_csv(const SampleRealization& real, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    char buf[64];
    for (std::size_t nu = 0; nu < real.samples.rows(); ++nu) {
        for (std::size_t j = 0; j < real.samples.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", real.samples(nu, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

void write_realization_sidecar(const SampleRealization& real, const SpikedModel& model,
                               const std::string& path) {
    nlohmann::ordered_json j;
    j["seed"] = real.seed;
    j["n"] = real.n;
    j["model"] = {{"signal_norm", model.signal_norm},
                  {"noise_level", model.noise_level},
                  {"dimension", model.dimension},
                  {"latent_law", latent_law_name(model.latent_law)}};
    j["latents_u"] = real.latents_u;
    std::vector<Vector> xi_rows;
    xi_rows.reserve(real.latents_xi.rows());
    for (std::size_t nu = 0; nu < real.latents_xi.rows(); ++nu)
        xi_rows.emplace_back(real.latents_xi.row(nu),
                             real.latents_xi.row(nu) + real.latents_xi.cols());
    j["latents_xi"] = xi_rows;
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace spikepca
