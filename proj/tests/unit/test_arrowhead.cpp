#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "spikepca/arrowhead.hpp"
#include "spikepca/errors.hpp"
#include "spikepca/rng.hpp"

using namespace spikepca;

namespace {

ArrowheadMatrix random_arrowhead(std::size_t p, std::uint64_t stream, double shaft_scale = 1.0) {
    rng::Philox gen(0xa8a8, stream);
    ArrowheadMatrix a;
    a.head = 3.0 + gen.uniform();
    a.shaft.resize(p - 1);
    a.tail.resize(p - 1);
    for (std::size_t j = 0; j + 1 < p; ++j) {
        a.shaft[j] = shaft_scale * gen.normal() / std::sqrt(static_cast<double>(p));
        a.tail[j] = 1.0 + gen.uniform();
    }
    return a;
}

double vector_mismatch(const Matrix& a, const Matrix& b, std::size_t col_a, std::size_t col_b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) dot += a(i, col_a) * b(i, col_b);
    return 1.0 - std::fabs(dot);
}

}  // namespace

TEST_CASE("two by two arrowhead has the closed-form eigenvalues 1 +/- sqrt(2)") {
    ArrowheadMatrix a;
    a.head = 2.0;
    a.shaft = {1.0};
    a.tail = {0.0};
    const EigResult e = arrowhead_eig(a);
    CHECK(e.values[0] == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("zero shaft fully deflates: eigenvalues are head plus tail") {
    ArrowheadMatrix a;
    a.head = 0.5;
    a.shaft = {0.0, 0.0, 0.0};
    a.tail = {2.0, 1.0, -1.0};
    const EigResult e = arrowhead_eig(a);
    const Vector expect = {2.0, 1.0, 0.5, -1.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(e.values[i] == doctest::Approx(expect[i]));
    for (std::size_t c = 0; c < 4; ++c) {
        double mx = 0.0;
        for (std::size_t r = 0; r < 4; ++r) mx = std::max(mx, std::fabs(e.vectors(r, c)));
        CHECK(mx == doctest::Approx(1.0));
    }
}

TEST_CASE("secular roots match the dense solver across sizes") {
    for (std::size_t p : {std::size_t{10}, std::size_t{60}, std::size_t{200}}) {
        const ArrowheadMatrix a = random_arrowhead(p, 11 * p);
        const EigResult fast = arrowhead_eig(a);
        const Vector dense = sym_eigvals(a.dense());
        double scale = 0.0;
        for (double v : dense) scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 0; i < p; ++i)
            CHECK(std::fabs(fast.values[i] - dense[i]) <= 1e-11 * scale);
    }
}

TEST_CASE("eigenvectors match the dense solver up to sign") {
    const std::size_t p = 40;
    const ArrowheadMatrix a = random_arrowhead(p, 5);
    const EigResult fast = arrowhead_eig(a);
    const EigResult dense = sym_eig(a.dense());
    for (std::size_t c = 0; c < p; ++c)
        CHECK(vector_mismatch(fast.vectors, dense.vectors, c, c) < 1e-8);
}

TEST_CASE("eigenvector residuals and orthonormality") {
    const std::size_t p = 80;
    const ArrowheadMatrix a = random_arrowhead(p, 21);
    const Matrix dense = a.dense();
    const EigResult e = arrowhead_eig(a);
    double norm_a = 0.0;
    for (double v : sym_eigvals(dense)) norm_a = std::max(norm_a, std::fabs(v));
    for (std::size_t c = 0; c < p; ++c) {
        Vector v(p);
        for (std::size_t i = 0; i < p; ++i) v[i] = e.vectors(i, c);
        Vector mv = linalg::matvec(dense, v);
        for (std::size_t i = 0; i < p; ++i) mv[i] -= e.values[c] * v[i];
        CHECK(linalg::norm2(mv) <= 1e-9 * norm_a);
    }
    for (std::size_t x = 0; x < p; x += 7)
        for (std::size_t y = x + 1; y < p; y += 5) {
            double dot = 0.0;
            for (std::size_t i = 0; i < p; ++i) dot += e.vectors(i, x) * e.vectors(i, y);
            CHECK(std::fabs(dot) < 1e-8);
        }
}

TEST_CASE("interlacing with the sorted tail poles") {
    const std::size_t p = 30;
    const ArrowheadMatrix a = random_arrowhead(p, 33);
    Vector tail = a.tail;
    std::sort(tail.begin(), tail.end(), std::greater<double>());
    const EigResult e = arrowhead_eig(a);
    for (std::size_t i = 0; i + 1 < p; ++i) {
        CHECK(e.values[i] > tail[i]);
        CHECK(tail[i] > e.values[i + 1]);
    }
}

TEST_CASE("trace and frobenius conservation") {
    const std::size_t p = 50;
    const ArrowheadMatrix a = random_arrowhead(p, 44);
    const EigResult e = arrowhead_eig(a);
    double trace = a.head, fro2 = a.head * a.head;
    for (std::size_t j = 0; j + 1 < p; ++j) {
        trace += a.tail[j];
        fro2 += a.tail[j] * a.tail[j] + 2.0 * a.shaft[j] * a.shaft[j];
    }
    double tsum = 0.0, fsum = 0.0;
    for (double v : e.values) {
        tsum += v;
        fsum += v * v;
    }
    CHECK(std::fabs(tsum - trace) <= 1e-10 * std::fabs(trace));
    CHECK(std::fabs(fsum - fro2) <= 1e-9 * std::fabs(fro2));
}

TEST_CASE("coincident poles merge; one surplus eigenvalue passes through exactly") {
    ArrowheadMatrix a;
    a.head = 5.0;
    a.shaft = {0.6, 0.8, 0.3};
    a.tail = {2.0, 2.0, 1.0};
    const EigResult e = arrowhead_eig(a);
    int exact = 0;
    for (double v : e.values) exact += (v == 2.0);
    CHECK(exact == 1);
    const Vector dense = sym_eigvals(a.dense());
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(e.values[i] == doctest::Approx(dense[i]).epsilon(1e-12));
    const Matrix d = a.dense();
    for (std::size_t c = 0; c < 4; ++c) {
        Vector v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = e.vectors(i, c);
        Vector mv = linalg::matvec(d, v);
        for (std::size_t i = 0; i < 4; ++i) mv[i] -= e.values[c] * v[i];
        CHECK(linalg::norm2(mv) < 1e-9 * 7.0);
    }
}

TEST_CASE("tiny shaft entries deflate to coordinate pairs") {
    ArrowheadMatrix a;
    a.head = 4.0;
    a.shaft = {1.0, 1e-17};
    a.tail = {1.0, 2.0};
    const EigResult e = arrowhead_eig(a);
    int hits = 0;
    for (double v : e.values) hits += (v == 2.0);
    CHECK(hits == 1);
}

TEST_CASE("iteration cap exhaustion raises RootBracketFailure") {
    const ArrowheadMatrix a = random_arrowhead(12, 3);
    SecularOptions opt;
    opt.max_iterations = 0;
    CHECK_THROWS_AS(arrowhead_eig(a, opt), RootBracketFailure);
}

TEST_CASE("head far below the poles still brackets the extreme roots") {
    ArrowheadMatrix a;
    a.head = -10.0;
    a.shaft = {1.0};
    a.tail = {0.0};
    const EigResult e = arrowhead_eig(a);
    const Vector dense = sym_eigvals(a.dense());
    CHECK(e.values[0] == doctest::Approx(dense[0]).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(dense[1]).epsilon(1e-13));
}

TEST_CASE("arrowhead_reduce reconstructs and handles special shapes") {
    Matrix diag(4, 4);
    diag(0, 0) = 3.0;
    diag(1, 1) = 2.0;
    diag(2, 2) = 1.0;
    diag(3, 3) = 0.5;
    const ArrowheadReduction rd = arrowhead_reduce(diag);
    CHECK(rd.arrow.head == doctest::Approx(3.0));
    for (double s : rd.arrow.shaft) CHECK(std::fabs(s) < 1e-14);

    ArrowheadMatrix a;
    a.head = 1.5;
    a.shaft = {0.3, -0.4, 0.2};
    a.tail = {0.9, 2.2, 0.1};
    const Matrix s = a.dense();
    const ArrowheadReduction r2 = arrowhead_reduce(s);
    Vector sorted_tail = a.tail;
    std::sort(sorted_tail.begin(), sorted_tail.end(), std::greater<double>());
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(r2.arrow.tail[i] == doctest::Approx(sorted_tail[i]).epsilon(1e-12));
    Vector abs_shaft, abs_orig;
    for (double v : r2.arrow.shaft) abs_shaft.push_back(std::fabs(v));
    for (double v : a.shaft) abs_orig.push_back(std::fabs(v));
    std::sort(abs_shaft.begin(), abs_shaft.end());
    std::sort(abs_orig.begin(), abs_orig.end());
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(abs_shaft[i] == doctest::Approx(abs_orig[i]).epsilon(1e-11));

    rng::Philox gen(99, 0);
    Matrix rs(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i; j < 6; ++j) {
            const double v = gen.normal();
            rs(i, j) = v;
            rs(j, i) = v;
        }
    const ArrowheadReduction r3 = arrowhead_reduce(rs);
    Matrix vs(6, 6), vsvt(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 6; ++k) acc += r3.basis(i, k) * rs(k, j);
            vs(i, j) = acc;
        }
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 6; ++k) acc += vs(i, k) * r3.basis(j, k);
            vsvt(i, j) = acc;
        }
    const Matrix arrow_dense = r3.arrow.dense();
    CHECK(linalg::max_abs_diff(vsvt, arrow_dense) < 1e-10 * (1.0 + linalg::max_abs(rs)));
}

TEST_CASE("arrowhead json round trip") {
    ArrowheadMatrix a;
    a.head = 1.25;
    a.shaft = {0.5, -0.25};
    a.tail = {2.0, 0.125};
    const ArrowheadMatrix b = arrowhead_from_json(arrowhead_to_json(a));
    CHECK(b.head == a.head);
    CHECK(b.shaft == a.shaft);
    CHECK(b.tail == a.tail);
}
