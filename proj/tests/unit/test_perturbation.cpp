#include <cmath>

#include "doctest.h"
#include "spikepca/eig.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/perturbation.hpp"

using namespace spikepca;

namespace {

Matrix assemble(const CovarianceDecomposition& d, double sigma) {
    const std::size_t p = d.rho.size();
    Matrix s(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            s(i, j) = d.L0(i, j) + sigma * d.L1(i, j) + sigma * sigma * d.L2(i, j);
    return s;
}

double fit_slope(const Vector& logx, const Vector& logy) {
    const double n = static_cast<double>(logx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logx.size(); ++i) {
        sx += logx[i];
        sy += logy[i];
        sxx += logx[i] * logx[i];
        sxy += logx[i] * logy[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("taylor coefficients: structure and degenerate noise") {
    const SpikedModel model(1.2, 0.4, 8);
    SampleRealization r = sample_model(model, 30, 71);
    const CovarianceDecomposition d = decompose_covariance(r, model);
    const TaylorEigenpair t = taylor_expand(d);

    CHECK(t.lambda_terms[0] == doctest::Approx(d.kappa * d.kappa));
    CHECK(t.lambda_terms[1] == doctest::Approx(2.0 * d.kappa * d.rho[0]));
    double tail2 = 0.0;
    for (std::size_t j = 1; j < 8; ++j) tail2 += d.rho[j] * d.rho[j];
    CHECK(t.lambda_terms[2] == doctest::Approx(tail2 + d.beta(0, 0)));
    CHECK(t.vector_terms[0][0] == 1.0);
    CHECK(t.vector_terms[1][0] == 0.0);
    CHECK(t.vector_terms[2][0] == 0.0);
    CHECK(t.vector_terms[1][3] == doctest::Approx(d.rho[3] / d.kappa));
    CHECK(t.vector_terms[2][3] ==
          doctest::Approx((d.beta(0, 3) - 2.0 * d.rho[0] * d.rho[3]) / (d.kappa * d.kappa)));
    CHECK_FALSE(t.radius_note.empty());

    // zero-noise realization: lambda terms (kappa^2, 0, 0), vectors (e1, 0, 0)
    r.latents_xi = Matrix(30, 8);
    const CovarianceDecomposition d0 = decompose_covariance(r, model);
    const TaylorEigenpair t0 = taylor_expand(d0);
    CHECK(t0.lambda_terms[1] == 0.0);
    CHECK(t0.lambda_terms[2] == 0.0);
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(t0.vector_terms[1][j] == 0.0);
        CHECK(t0.vector_terms[2][j] == 0.0);
    }
}

TEST_CASE("lambda quadratic error decays like sigma^3 (dense-solver oracle)") {
    const std::size_t p = 50, n = 100;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const SpikedModel model(1.0, 1.0, p);
        const SampleRealization r = sample_model(model, n, seed);
        const CovarianceDecomposition d = decompose_covariance(r, model);
        const TaylorEigenpair t = taylor_expand(d);
        Vector lx, ly;
        for (double sigma = 1e-4; sigma < 1.05e-2; sigma *= std::sqrt(10.0)) {
            const PcaResult exact = top_pair(assemble(d, sigma));
            const double err = std::fabs(exact.lambda_pca - t.lambda_at(sigma));
            REQUIRE(err > 0.0);
            lx.push_back(std::log(sigma));
            ly.push_back(std::log(err));
        }
        const double slope = fit_slope(lx, ly);
        CHECK(slope == doctest::Approx(3.0).epsilon(0.067));  // 3.0 +/- 0.2
    }
}

TEST_CASE("eigenvector linear-expansion angle decays like sigma^2") {
    const std::size_t p = 50, n = 100;
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
        const SpikedModel model(1.0, 1.0, p);
        const SampleRealization r = sample_model(model, n, seed);
        const CovarianceDecomposition d = decompose_covariance(r, model);
        const TaylorEigenpair t = taylor_expand(d);
        Vector lx, ly;
        for (double sigma = 1e-4; sigma < 1.05e-2; sigma *= std::sqrt(10.0)) {
            const PcaResult exact = top_pair(assemble(d, sigma));
            Vector lin = t.linear_vector_at(sigma);
            linalg::normalize(lin);
            // sine of the angle via the orthogonal residual (stable near 0)
            Vector resid = exact.v_pca;
            linalg::axpy(-linalg::dot(lin, exact.v_pca), lin, resid);
            const double angle = linalg::norm2(resid);
            REQUIRE(angle > 0.0);
            lx.push_back(std::log(sigma));
            ly.push_back(std::log(angle));
        }
        const double slope = fit_slope(lx, ly);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.1));  // 2.0 +/- 0.2
    }
}

TEST_CASE("degenerate basepoint throws") {
    CovarianceDecomposition d;
    d.kappa = 0.0;
    d.rho = {0.0, 0.0};
    CHECK_THROWS_AS(taylor_expand(d), DegenerateSignal);
}

TEST_CASE("lambda moment formulas") {
    // Gaussian u at sigma=0: mean ||v||^2, girshick variance 2||v||^4/n
    const SpikedModel g(1.5, 0.0, 20);
    const LambdaMoments m0 = lambda_moments(g, 50);
    CHECK(m0.mean == doctest::Approx(2.25));
    CHECK(m0.variance_girshick == doctest::Approx(2.0 * 2.25 * 2.25 / 50.0));
    CHECK(m0.variance_printed == doctest::Approx(3.0 * 2.25 * 2.25 / 50.0));

    // the worked configuration: mean 1.0138
    const SpikedModel w(1.0, 0.1, 20);
    CHECK(lambda_moments(w, 50).mean == doctest::Approx(1.0138).epsilon(1e-12));

    // Rademacher latents at sigma=0 have zero variance in both readings
    const SpikedModel rad(1.0, 0.0, 20, LatentLaw::Rademacher);
    CHECK(lambda_moments(rad, 50).variance_girshick == doctest::Approx(0.0));
}

TEST_CASE("sintheta moment formulas") {
    // p=2: mean = sigma/(kappa sqrt n) sqrt(2/pi)
    const SinThetaMoments m2 = sintheta_moments(1.0, 100, 2, 0.01);
    CHECK(m2.mean == doctest::Approx(0.001 * std::sqrt(2.0 / M_PI)).epsilon(1e-12));

    // frozen oracle coefficient at p=50
    const SinThetaMoments m50 = sintheta_moments(1.0, 100, 50, 0.01);
    CHECK(m50.mean == doctest::Approx(0.00696437913268812977).epsilon(1e-12));
    CHECK(m50.variance == doctest::Approx(0.01 * 0.01 / (2.0 * 100.0)).epsilon(1e-12));

    // large-p asymptote: sigma sqrt(p) / (kappa sqrt n) (1 - 1/(4(p-1)))
    const std::size_t p = 1000000;
    const SinThetaMoments big = sintheta_moments(2.0, 10, p, 0.1);
    const double approx = 0.1 * std::sqrt(static_cast<double>(p)) / (2.0 * std::sqrt(10.0)) *
                          (1.0 - 1.0 / (4.0 * (p - 1.0)));
    CHECK(big.mean == doctest::Approx(approx).epsilon(1e-5));
}

TEST_CASE("trust region flag flips where the quadratic term reaches half the constant") {
    const SpikedModel model(1.0, 1.0, 30);
    const SampleRealization r = sample_model(model, 60, 3);
    const CovarianceDecomposition d = decompose_covariance(r, model);
    const TaylorEigenpair t = taylor_expand(d);
    const double sigma_star = std::sqrt(0.5 * t.lambda_terms[0] / t.lambda_terms[2]);
    CHECK(t.within_trust_region(0.9 * sigma_star));
    CHECK_FALSE(t.within_trust_region(1.1 * sigma_star));
}
