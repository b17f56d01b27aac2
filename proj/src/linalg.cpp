#include "spikepca/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace spikepca::linalg {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot(const Vector& a, const Vector& b) noexcept { return dot(a.data(), b.data(), a.size()); }

double norm2(const Vector& a) noexcept { return std::sqrt(dot(a, a)); }

void scale(Vector& a, double s) noexcept {
    for (double& v : a) v *= s;
}

void axpy(double s, const Vector& x, Vector& y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

void normalize(Vector& a) {
    const double n = norm2(a);
    if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
    scale(a, 1.0 / n);
}

Vector matvec(const Matrix& m, const Vector& x) {
    Vector y(m.rows());
    const std::int64_t rows = static_cast<std::int64_t>(m.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) y[i] = dot(m.row(i), x.data(), m.cols());
    return y;
}

Vector matvec_transposed(const Matrix& m, const Vector& x) {
    Vector y(m.cols(), 0.0);
    // strided columns: accumulate row-wise, parallel over column slices
    const std::int64_t cols = static_cast<std::int64_t>(m.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * x[i];
        y[j] = s;
    }
    return y;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

Matrix gram(const Matrix& x, double scale) {
    const Matrix xt = transpose(x);  // p rows of length n, unit stride dots
    const std::size_t p = xt.rows();
    const std::size_t n = xt.cols();
    Matrix g(p, p);
    const std::int64_t rows = static_cast<std::int64_t>(p);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double v = scale * dot(xt.row(i), xt.row(j), n);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Matrix gram_dual(const Matrix& x, double scale) {
    const std::size_t n = x.rows();
    Matrix g(n, n);
    const std::int64_t rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = scale * dot(x.row(i), x.row(j), x.cols());
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

double max_abs(const Matrix& m) noexcept {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) v = std::max(v, std::fabs(m.data()[i]));
    return v;
}

double max_abs_diff(const Matrix& a, const Matrix& b) noexcept {
    double v = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        v = std::max(v, std::fabs(a.data()[i] - b.data()[i]));
    return v;
}

double frobenius(const Matrix& m) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) s += m.data()[i] * m.data()[i];
    return std::sqrt(s);
}

double asymmetry(const Matrix& m) noexcept {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            v = std::max(v, std::fabs(m(i, j) - m(j, i)));
    return v;
}

}  // namespace spikepca::linalg
