#include <cmath>

#include "doctest.h"
#include "spikepca/eig.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/linalg.hpp"
#include "spikepca/reference.hpp"
#include "spikepca/rng.hpp"

using namespace spikepca;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t stream) {
    rng::Philox gen(0xabcdef, stream);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = gen.normal();
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

Matrix random_rect(std::size_t n, std::size_t p, std::uint64_t stream) {
    rng::Philox gen(0x5151, stream);
    Matrix m(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) m(i, j) = gen.normal();
    return m;
}

double eig_residual(const Matrix& m, const EigResult& e) {
    double worst = 0.0;
    for (std::size_t c = 0; c < e.vectors.cols(); ++c) {
        Vector v(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) v[i] = e.vectors(i, c);
        Vector mv = linalg::matvec(m, v);
        for (std::size_t i = 0; i < m.rows(); ++i) mv[i] -= e.values[c] * v[i];
        worst = std::max(worst, linalg::norm2(mv));
    }
    return worst;
}

double max_offdiag_vtv(const Matrix& vecs) {
    double worst = 0.0;
    for (std::size_t a = 0; a < vecs.cols(); ++a)
        for (std::size_t b = 0; b < vecs.cols(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < vecs.rows(); ++i) dot += vecs(i, a) * vecs(i, b);
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

TEST_CASE("omp gram kernels agree with the serial references") {
    const Matrix x = random_rect(37, 23, 1);
    const Matrix g = linalg::gram(x, 1.0 / 37.0);
    const Matrix g_ref = reference::covariance_naive(x, 1.0 / 37.0);
    CHECK(linalg::max_abs_diff(g, g_ref) < 1e-13 * (1.0 + linalg::max_abs(g_ref)));

    const Matrix d = linalg::gram_dual(x, 0.5);
    const Matrix d_ref = reference::gram_dual_serial(x, 0.5);
    CHECK(linalg::max_abs_diff(d, d_ref) < 1e-13 * (1.0 + linalg::max_abs(d_ref)));
}

TEST_CASE("sym_eig identity and diagonal cases with stable tie order") {
    const EigResult ei = sym_eig(Matrix::identity(6));
    for (double v : ei.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_offdiag_vtv(ei.vectors) < 1e-12);
    // stable: first eigenvector is e1
    CHECK(ei.vectors(0, 0) == doctest::Approx(1.0));

    Matrix d2(2, 2);
    d2(0, 0) = 3.0;
    d2(1, 1) = 1.0;
    const EigResult ed = sym_eig(d2);
    CHECK(ed.values[0] == doctest::Approx(3.0));
    CHECK(ed.values[1] == doctest::Approx(1.0));
    CHECK(std::fabs(ed.vectors(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig roots match the determinant-expansion characteristic polynomial") {
    for (std::uint64_t s = 0; s < 4; ++s) {
        const Matrix m = random_symmetric(5, 100 + s);
        const Vector vals = sym_eigvals(m);
        const Vector roots = reference::charpoly_roots(m);
        REQUIRE(roots.size() == 5);
        const double scale = linalg::max_abs(m) * 5.0;
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(std::fabs(vals[i] - roots[i]) < 1e-9 * scale);
    }
}

TEST_CASE("sym_eig agrees with the serial jacobi reference and satisfies residuals") {
    const Matrix m = random_symmetric(40, 7);
    const EigResult e = sym_eig(m);
    Vector jvals;
    Matrix jvecs;
    reference::jacobi_eig(m, jvals, jvecs);
    const double scale = std::fabs(e.values[0]) + std::fabs(e.values[39]);
    for (std::size_t i = 0; i < 40; ++i) CHECK(std::fabs(e.values[i] - jvals[i]) < 1e-11 * scale);
    CHECK(eig_residual(m, e) < 1e-10 * (1.0 + scale));
    CHECK(max_offdiag_vtv(e.vectors) < 1e-10);
}

TEST_CASE("sym_eig rejects asymmetric input") {
    Matrix m(3, 3);
    m(0, 1) = 1.0;
    m(1, 0) = 2.0;
    CHECK_THROWS_AS(sym_eig(m), NotSymmetric);
}

TEST_CASE("sym_eig_topk vectors match the full decomposition") {
    const Matrix m = random_symmetric(60, 11);
    const EigResult full = sym_eig(m);
    const EigResult topk = sym_eig_topk(m, 3);
    const double scale = std::fabs(full.values[0]);
    for (std::size_t i = 0; i < 60; ++i)
        CHECK(full.values[i] == doctest::Approx(topk.values[i]).epsilon(1e-11));
    for (std::size_t c = 0; c < 3; ++c) {
        double dot = 0.0;
        for (std::size_t i = 0; i < 60; ++i) dot += full.vectors(i, c) * topk.vectors(i, c);
        CHECK(std::fabs(dot) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(eig_residual(m, topk) < 1e-9 * (1.0 + scale));
}

TEST_CASE("top_pair basics") {
    // sigma = 0 covariance kappa^2 e1 e1^T
    Matrix m(4, 4);
    m(0, 0) = 2.5;
    const PcaResult r = top_pair(m);
    CHECK(r.lambda_pca == doctest::Approx(2.5));
    CHECK(r.overlap == doctest::Approx(1.0));
    CHECK(r.sin_theta == doctest::Approx(0.0));

    Matrix two(2, 2);
    two(0, 0) = 2.0;
    two(0, 1) = 1.0;
    two(1, 0) = 1.0;
    two(1, 1) = 2.0;
    const PcaResult r2 = top_pair(two);
    CHECK(r2.lambda_pca == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(r2.lambda2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r2.overlap == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r2.v_pca[0] > 0.0);

    const PcaResult rid = top_pair(Matrix::identity(5));
    CHECK(rid.lambda_pca == doctest::Approx(1.0));
    const double norm = linalg::norm2(rid.v_pca);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    // ties broken toward the lowest coordinate index
    CHECK(std::fabs(rid.v_pca[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pca result invariants on random covariances") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix x = random_rect(30, 12, 40 + s);
        const Matrix cov = linalg::gram(x, 1.0 / 30.0);
        const PcaResult r = top_pair(cov);
        CHECK(linalg::norm2(r.v_pca) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.lambda_pca >= r.lambda2);
        CHECK(r.sin_theta * r.sin_theta + r.overlap * r.overlap ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.v_pca[0] >= 0.0);
    }
}
