#include "spikepca/eig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "spikepca/errors.hpp"
#include "spikepca/rng.hpp"

namespace spikepca {

namespace detail {

Tridiagonal tridiagonalize(const Matrix& m) {
    const std::size_t n = m.rows();
    Tridiagonal t;
    t.house = m;
    t.d.assign(n, 0.0);
    t.e.assign(n > 0 ? n - 1 : 0, 0.0);
    t.tau.assign(n > 2 ? n - 2 : 0, 0.0);
    Matrix& a = t.house;

    Vector v(n), w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t mlen = n - k - 1;  // length of the column below the diagonal
        // Householder vector for a[k+1..n-1, k], LAPACK dlarfg convention (v[0]=1).
        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < mlen; ++i) {
            const double xi = a(k + 1 + i, k);
            xnorm2 += xi * xi;
        }
        const double x0 = a(k + 1, k);
        const double xnorm = std::sqrt(xnorm2);
        double tailnorm2 = xnorm2 - x0 * x0;
        if (tailnorm2 <= 0.0 || xnorm == 0.0) {
            t.tau[k] = 0.0;
            t.e[k] = x0;
            a(k + 1, k) = 0.0;  // tail already zero
            continue;
        }
        const double beta = (x0 >= 0.0) ? -xnorm : xnorm;
        const double tau = (beta - x0) / beta;
        const double inv = 1.0 / (x0 - beta);
        v[0] = 1.0;
        for (std::size_t i = 1; i < mlen; ++i) v[i] = a(k + 1 + i, k) * inv;
        t.tau[k] = tau;
        t.e[k] = beta;

        // w = tau * A22 v ; then w -= (tau/2)(v.w) v ; A22 -= v w^T + w v^T
        const std::int64_t rows = static_cast<std::int64_t>(mlen);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < rows; ++i) {
            const double* arow = a.row(k + 1 + i) + (k + 1);
            double s = 0.0;
            for (std::size_t j = 0; j < mlen; ++j) s += arow[j] * v[j];
            w[i] = tau * s;
        }
        double vw = 0.0;
        for (std::size_t i = 0; i < mlen; ++i) vw += v[i] * w[i];
        const double half = 0.5 * tau * vw;
        for (std::size_t i = 0; i < mlen; ++i) w[i] -= half * v[i];
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < rows; ++i) {
            double* arow = a.row(k + 1 + i) + (k + 1);
            const double vi = v[i], wi = w[i];
            for (std::size_t j = 0; j < mlen; ++j) arow[j] -= vi * w[j] + wi * v[j];
        }
        // store the reflector tail in the eliminated column
        for (std::size_t i = 1; i < mlen; ++i) a(k + 1 + i, k) = v[i];
    }
    if (n >= 2) t.e[n - 2] = a(n - 1, n - 2);
    for (std::size_t i = 0; i < n; ++i) t.d[i] = a(i, i);
    return t;
}

void apply_q(const Tridiagonal& t, Vector& x) {
    const std::size_t n = t.d.size();
    if (n < 3) return;
    for (std::size_t kk = n - 2; kk-- > 0;) {  // k = n-3 .. 0
        const std::size_t k = kk;
        const double tau = t.tau[k];
        if (tau == 0.0) continue;
        const std::size_t mlen = n - k - 1;
        double s = x[k + 1];
        for (std::size_t i = 1; i < mlen; ++i) s += t.house(k + 1 + i, k) * x[k + 1 + i];
        s *= tau;
        x[k + 1] -= s;
        for (std::size_t i = 1; i < mlen; ++i) x[k + 1 + i] -= s * t.house(k + 1 + i, k);
    }
}

Matrix accumulate_q(const Tridiagonal& t) {
    const std::size_t n = t.d.size();
    Matrix q = Matrix::identity(n);
    if (n < 3) return q;
    for (std::size_t kk = n - 2; kk-- > 0;) {
        const std::size_t k = kk;
        const double tau = t.tau[k];
        if (tau == 0.0) continue;
        const std::size_t mlen = n - k - 1;
        // q[k+1.., k+1..] <- H q[k+1.., k+1..]  (columns independent)
        const std::int64_t cols = static_cast<std::int64_t>(n - k - 1);
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < cols; ++c) {
            const std::size_t col = k + 1 + c;
            double s = q(k + 1, col);
            for (std::size_t i = 1; i < mlen; ++i) s += t.house(k + 1 + i, k) * q(k + 1 + i, col);
            s *= tau;
            q(k + 1, col) -= s;
            for (std::size_t i = 1; i < mlen; ++i) q(k + 1 + i, col) -= s * t.house(k + 1 + i, k);
        }
    }
    return q;
}

bool ql_implicit(Vector& d, Vector& e, Matrix* z) {
    const std::size_t n = d.size();
    if (n <= 1) return true;
    Vector ework(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) ework[i] = e[i];

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(ework[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) return false;
                double g = (d[l + 1] - d[l]) / (2.0 * ework[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + ework[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    const std::size_t i = ii;
                    double f = s * ework[i];
                    const double b = c * ework[i];
                    r = std::hypot(f, g);
                    ework[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        ework[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (std::size_t krow = 0; krow < z->rows(); ++krow) {
                            f = (*z)(krow, i + 1);
                            (*z)(krow, i + 1) = s * (*z)(krow, i) + c * f;
                            (*z)(krow, i) = c * (*z)(krow, i) - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                ework[l] = g;
                ework[m] = 0.0;
            }
        } while (m != l);
    }
    return true;
}

void solve_shifted_tridiagonal(const Vector& d, const Vector& e, double mu, Vector& x) {
    const std::size_t n = d.size();
    Vector diag(n), sup1(n, 0.0), sup2(n, 0.0);
    double scale = std::fabs(mu);
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(d[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max(scale, std::fabs(e[i]));
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

    for (std::size_t i = 0; i < n; ++i) diag[i] = d[i] - mu;
    for (std::size_t i = 0; i + 1 < n; ++i) sup1[i] = e[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        double sub = e[i];
        if (std::fabs(sub) > std::fabs(diag[i])) {
            // swap rows i and i+1
            std::swap(x[i], x[i + 1]);
            const double a_old = diag[i], b_old = sup1[i], c_old = sup2[i];
            diag[i] = sub;
            sup1[i] = diag[i + 1];
            sup2[i] = sup1[i + 1];
            const double mfac = a_old / diag[i];
            diag[i + 1] = b_old - mfac * sup1[i];
            sup1[i + 1] = c_old - mfac * sup2[i];
            x[i + 1] -= mfac * x[i];
        } else {
            if (diag[i] == 0.0) diag[i] = tiny;
            const double mfac = sub / diag[i];
            diag[i + 1] -= mfac * sup1[i];
            sup1[i + 1] -= mfac * sup2[i];
            x[i + 1] -= mfac * x[i];
        }
    }
    if (diag[n - 1] == 0.0) diag[n - 1] = tiny;
    x[n - 1] /= diag[n - 1];
    if (n >= 2) {
        if (diag[n - 2] == 0.0) diag[n - 2] = tiny;
        x[n - 2] = (x[n - 2] - sup1[n - 2] * x[n - 1]) / diag[n - 2];
    }
    for (std::size_t ii = n - 1; ii-- > 1;) {
        const std::size_t i = ii - 1;
        if (diag[i] == 0.0) diag[i] = tiny;
        x[i] = (x[i] - sup1[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
    }
}

namespace {

void check_symmetric(const Matrix& m) {
    if (m.rows() != m.cols()) throw NotSymmetric("matrix is not square");
    const double tol = 1e-10 * std::max(1.0, linalg::max_abs(m));
    if (linalg::asymmetry(m) > tol)
        throw NotSymmetric("matrix asymmetry exceeds tolerance");
}

void sort_descending(Vector& values, Matrix* vectors) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
    Vector sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];
    values = sorted;
    if (vectors) {
        Matrix perm(vectors->rows(), vectors->cols());
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < vectors->rows(); ++r) perm(r, c) = (*vectors)(r, order[c]);
        *vectors = perm;
    }
}

void fix_signs(Matrix& vectors) {
    // largest-magnitude component made positive
    for (std::size_t c = 0; c < vectors.cols(); ++c) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t r = 0; r < vectors.rows(); ++r) {
            const double a = std::fabs(vectors(r, c));
            if (a > best) {
                best = a;
                arg = r;
            }
        }
        if (vectors(arg, c) < 0.0)
            for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, c) = -vectors(r, c);
    }
}

}  // namespace

}  // namespace detail

EigResult sym_eig(const Matrix& m) {
    detail::check_symmetric(m);
    const std::size_t n = m.rows();
    if (n == 1) return {{m(0, 0)}, Matrix::identity(1)};
    detail::Tridiagonal t = detail::tridiagonalize(m);
    Matrix z = detail::accumulate_q(t);
    Vector d = t.d;
    if (!detail::ql_implicit(d, t.e, &z))
        throw NoConvergence("sym_eig: QL iteration limit reached");
    detail::sort_descending(d, &z);
    detail::fix_signs(z);
    return {std::move(d), std::move(z)};
}

Vector sym_eigvals(const Matrix& m) {
    detail::check_symmetric(m);
    const std::size_t n = m.rows();
    if (n == 1) return {m(0, 0)};
    detail::Tridiagonal t = detail::tridiagonalize(m);
    Vector d = t.d;
    if (!detail::ql_implicit(d, t.e, nullptr))
        throw NoConvergence("sym_eigvals: QL iteration limit reached");
    detail::sort_descending(d, nullptr);
    return d;
}

EigResult sym_eig_topk(const Matrix& m, std::size_t k) {
    detail::check_symmetric(m);
    const std::size_t n = m.rows();
    k = std::min(k, n);
    if (n == 1) return {{m(0, 0)}, Matrix::identity(1)};

    detail::Tridiagonal t = detail::tridiagonalize(m);
    const Vector d0 = t.d;
    const Vector e0 = t.e;
    Vector d = t.d;
    Vector e = t.e;
    if (!detail::ql_implicit(d, e, nullptr))
        throw NoConvergence("sym_eig_topk: QL iteration limit reached");
    detail::sort_descending(d, nullptr);

    Matrix vectors(n, k);
    double emax = 0.0;
    for (double v : e0) emax = std::max(emax, std::fabs(v));
    if (emax == 0.0) {
        // already diagonal: coordinate eigenvectors, stable tie order
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return d0[i] > d0[j]; });
        for (std::size_t c = 0; c < k; ++c) vectors(order[c], c) = 1.0;
        return {std::move(d), std::move(vectors)};
    }

    double scale = 0.0;
    for (double v : d0) scale = std::max(scale, std::fabs(v));
    scale = std::max(scale, emax);

    // inverse iteration per requested eigenvalue, orthogonalized inside clusters
    std::vector<Vector> basis;
    basis.reserve(k);
    rng::Philox gen(0x9E3779B97F4A7C15ULL, 0xE16ULL);
    for (std::size_t c = 0; c < k; ++c) {
        Vector y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = gen.normal();
        linalg::normalize(y);
        for (int pass = 0; pass < 3; ++pass) {
            detail::solve_shifted_tridiagonal(d0, e0, d[c], y);
            // orthogonalize against earlier vectors in the same cluster
            for (std::size_t b = 0; b < c; ++b) {
                if (std::fabs(d[b] - d[c]) < 1e-8 * std::max(scale, 1.0)) {
                    const double proj = linalg::dot(basis[b], y);
                    linalg::axpy(-proj, basis[b], y);
                }
            }
            const double norm = linalg::norm2(y);
            if (norm == 0.0 || !std::isfinite(norm)) {
                for (std::size_t i = 0; i < n; ++i) y[i] = gen.normal();
            }
            linalg::normalize(y);
        }
        basis.push_back(y);
        detail::apply_q(t, y);
        for (std::size_t r = 0; r < n; ++r) vectors(r, c) = y[r];
    }
    detail::fix_signs(vectors);
    return {std::move(d), std::move(vectors)};
}

PcaResult top_pair(const Matrix& m) {
    const EigResult eig = sym_eig_topk(m, std::min<std::size_t>(2, m.rows()));
    PcaResult r;
    r.lambda_pca = eig.values[0];
    r.lambda2 = eig.values.size() > 1 ? eig.values[1]
                                      : -std::numeric_limits<double>::infinity();
    r.v_pca.assign(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) r.v_pca[i] = eig.vectors(i, 0);
    if (r.v_pca[0] < 0.0)
        for (double& v : r.v_pca) v = -v;
    r.overlap = std::min(1.0, std::fabs(r.v_pca[0]));
    r.sin_theta = std::sqrt(std::max(0.0, 1.0 - r.overlap * r.overlap));
    return r;
}

Rank2Pair rank2_pair(const CovarianceDecomposition& decomp, double sigma) {
    if (!(decomp.kappa > 0.0)) throw DegenerateSignal("rank2_pair: kappa must be positive");
    const std::size_t p = decomp.rho.size();
    const double kappa = decomp.kappa;
    const double head = kappa * kappa + 2.0 * sigma * kappa * decomp.rho[0];
    double tail2 = 0.0;
    for (std::size_t j = 1; j < p; ++j) tail2 += decomp.rho[j] * decomp.rho[j];
    const double coupling2 = sigma * sigma * kappa * kappa * tail2;
    const double disc = std::sqrt(head * head + 4.0 * coupling2);

    Rank2Pair pair;
    pair.lambda_plus = 0.5 * (head + disc);
    pair.lambda_minus = 0.5 * (head - disc);
    pair.v_plus.assign(p, 0.0);
    if (pair.lambda_plus > 0.0) {
        const double f = sigma * kappa / pair.lambda_plus;
        pair.v_plus[0] = 1.0;
        for (std::size_t j = 1; j < p; ++j) pair.v_plus[j] = f * decomp.rho[j];
        pair.normalization = std::sqrt(1.0 + f * f * tail2);
        for (double& v : pair.v_plus) v /= pair.normalization;
    } else {
        // coupling vanished with a nonpositive head; any kernel direction works
        pair.v_plus[p > 1 ? 1 : 0] = 1.0;
        pair.normalization = 1.0;
    }
    return pair;
}

}  // namespace spikepca
