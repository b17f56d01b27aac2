#include "spikepca/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spikepca::reference {

Matrix covariance_naive(const Matrix& x, double scale) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix s(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            for (std::size_t nu = 0; nu < n; ++nu) acc += x(nu, i) * x(nu, j);
            s(i, j) = scale * acc;
        }
    return s;
}

Matrix gram_dual_serial(const Matrix& x, double scale) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < p; ++k) acc += x(i, k) * x(j, k);
            g(i, j) = scale * acc;
        }
    return g;
}

void jacobi_eig(const Matrix& m, Vector& eigenvalues, Matrix& eigenvectors) {
    const std::size_t n = m.rows();
    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) < 1e-14 * (1.0 + linalg::max_abs(a))) break;
        for (std::size_t ip = 0; ip + 1 < n; ++ip) {
            for (std::size_t iq = ip + 1; iq < n; ++iq) {
                const double apq = a(ip, iq);
                if (apq == 0.0) continue;
                const double theta = (a(iq, iq) - a(ip, ip)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, ip), akq = a(k, iq);
                    a(k, ip) = c * akp - s * akq;
                    a(k, iq) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(ip, k), aqk = a(iq, k);
                    a(ip, k) = c * apk - s * aqk;
                    a(iq, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, ip), vkq = v(k, iq);
                    v(k, ip) = c * vkp - s * vkq;
                    v(k, iq) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
    eigenvalues.assign(n, 0.0);
    eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        eigenvalues[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) eigenvectors(r, k) = v(r, order[k]);
    }
}

double det_expansion(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double det = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        Matrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t mj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == col) continue;
                minor(i - 1, mj++) = m(i, j);
            }
        }
        const double sign = (col % 2 == 0) ? 1.0 : -1.0;
        det += sign * m(0, col) * det_expansion(minor);
    }
    return det;
}

double charpoly_eval(const Matrix& m, double lambda) {
    Matrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lambda;
    return det_expansion(shifted);
}

Vector charpoly_roots(const Matrix& m, std::size_t grid) {
    const std::size_t n = m.rows();
    // Gershgorin interval
    double lo = m(0, 0), hi = m(0, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) radius += std::fabs(m(i, j));
        lo = std::min(lo, m(i, i) - radius);
        hi = std::max(hi, m(i, i) + radius);
    }
    const double pad = 1e-9 * (std::fabs(lo) + std::fabs(hi) + 1.0);
    lo -= pad;
    hi += pad;
    Vector roots;
    double prev_x = lo, prev_f = charpoly_eval(m, lo);
    for (std::size_t g = 1; g <= grid; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid);
        const double f = charpoly_eval(m, x);
        if ((prev_f < 0 && f > 0) || (prev_f > 0 && f < 0)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = charpoly_eval(m, mid);
                if ((fa < 0) == (fm < 0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
                if (b - a < 1e-15 * (std::fabs(a) + std::fabs(b) + 1.0)) break;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    std::sort(roots.begin(), roots.end(), std::greater<double>());
    return roots;
}

}  // namespace spikepca::reference
