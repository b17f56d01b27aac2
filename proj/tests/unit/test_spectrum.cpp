#include <cmath>

#include "doctest.h"
#include "spikepca/model.hpp"
#include "spikepca/spectrum.hpp"

using namespace spikepca;

namespace {

double col_mismatch(const Vector& a, const Vector& b) {
    return 1.0 - std::fabs(linalg::dot(a, b));
}

}  // namespace

TEST_CASE("dual path equals the primal dense decomposition (n < p)") {
    const SpikedModel model(1.8, 0.9, 120);
    const SampleRealization r = sample_model(model, 40, 17);
    const double scale = 1.0 / 40.0;
    const TopSpectrum fast = sample_top_two(r.samples, scale);
    CHECK(fast.lanczos_steps == 0);

    const Matrix cov = linalg::gram(r.samples, scale);
    const EigResult dense = sym_eig_topk(cov, 2);
    CHECK(fast.lambda1 == doctest::Approx(dense.values[0]).epsilon(1e-11));
    CHECK(fast.lambda2 == doctest::Approx(dense.values[1]).epsilon(1e-11));
    Vector d1(120), d2(120);
    for (std::size_t i = 0; i < 120; ++i) {
        d1[i] = dense.vectors(i, 0);
        d2[i] = dense.vectors(i, 1);
    }
    CHECK(col_mismatch(fast.v1, d1) < 1e-9);
    CHECK(col_mismatch(fast.v2, d2) < 1e-9);
    CHECK(linalg::norm2(fast.v1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("primal path runs when p < n") {
    const SpikedModel model(1.2, 0.5, 25);
    const SampleRealization r = sample_model(model, 80, 23);
    const TopSpectrum fast = sample_top_two(r.samples, 1.0 / 80.0);
    const Matrix cov = linalg::gram(r.samples, 1.0 / 80.0);
    const EigResult dense = sym_eig_topk(cov, 2);
    CHECK(fast.lambda1 == doctest::Approx(dense.values[0]).epsilon(1e-12));
    CHECK(fast.lambda2 == doctest::Approx(dense.values[1]).epsilon(1e-12));
}

TEST_CASE("lanczos path agrees with the dense path") {
    const SpikedModel model(2.0, 1.0, 300);
    const SampleRealization r = sample_model(model, 220, 5);
    const double scale = 1.0 / 220.0;
    const TopSpectrum dense = sample_top_two(r.samples, scale, 1, 700);
    const TopSpectrum lz = sample_top_two(r.samples, scale, 1, 100);  // force lanczos
    CHECK(lz.lanczos_steps > 0);
    CHECK(lz.lambda1 == doctest::Approx(dense.lambda1).epsilon(1e-9));
    CHECK(lz.lambda2 == doctest::Approx(dense.lambda2).epsilon(1e-7));
    CHECK(col_mismatch(lz.v1, dense.v1) < 1e-7);
    // spectral norm helper agrees
    CHECK(sample_spectral_norm(r.samples, scale) == doctest::Approx(dense.lambda1).epsilon(1e-11));
    CHECK(sample_spectral_norm(r.samples, scale, 1, 100) ==
          doctest::Approx(dense.lambda1).epsilon(1e-9));
}

TEST_CASE("lanczos is deterministic and resolves near-degenerate tops") {
    // pure noise: top eigenvalues cluster at the bulk edge
    const SpikedModel model(0.0, 1.0, 240);
    const SampleRealization r = sample_model(model, 240, 9);
    const TopSpectrum a = sample_top_two(r.samples, 1.0 / 240.0, 7, 64);
    const TopSpectrum b = sample_top_two(r.samples, 1.0 / 240.0, 7, 64);
    CHECK(a.lambda1 == b.lambda1);
    CHECK(a.v1 == b.v1);

    const TopSpectrum dense = sample_top_two(r.samples, 1.0 / 240.0);
    CHECK(a.lambda1 == doctest::Approx(dense.lambda1).epsilon(1e-8));
    CHECK(a.lambda2 == doctest::Approx(dense.lambda2).epsilon(1e-6));
}
