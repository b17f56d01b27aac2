#include "spikepca/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "spikepca/errors.hpp"
#include "spikepca/rng.hpp"

namespace spikepca {

namespace {

// y = scale * X (X^T w) on the dual (n-dimensional) side
Vector dual_op(const Matrix& x, double scale, const Vector& w) {
    Vector t = linalg::matvec_transposed(x, w);  // p
    Vector y = linalg::matvec(x, t);             // n
    linalg::scale(y, scale);
    return y;
}

// y = scale * X^T (X v) on the primal (p-dimensional) side
Vector primal_op(const Matrix& x, double scale, const Vector& v) {
    Vector t = linalg::matvec(x, v);                  // n
    Vector y = linalg::matvec_transposed(x, t);       // p
    linalg::scale(y, scale);
    return y;
}

struct LanczosResult {
    double theta1 = 0.0, theta2 = 0.0;
    Vector y1, y2;  // operator-side Ritz vectors
    int steps = 0;
};

template <typename Op>
LanczosResult lanczos_top_two(const Op& op, std::size_t dim, std::uint64_t stream,
                              std::size_t max_steps) {
    rng::Philox gen(0x7a6c5eedULL, stream);
    Vector v(dim);
    for (double& x : v) x = gen.normal();
    linalg::normalize(v);

    std::vector<Vector> basis;
    basis.reserve(max_steps);
    Vector alpha, beta;
    basis.push_back(v);

    LanczosResult out;
    const std::size_t check_every = 60;
    std::size_t m = 0;
    Vector w;
    for (std::size_t step = 0; step < max_steps; ++step) {
        w = op(basis[m]);
        const double a = linalg::dot(w, basis[m]);
        alpha.push_back(a);
        linalg::axpy(-a, basis[m], w);
        if (m > 0) linalg::axpy(-beta[m - 1], basis[m - 1], w);
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : basis) linalg::axpy(-linalg::dot(q, w), q, w);
        const double b = linalg::norm2(w);
        ++m;
        if (b < 1e-13) break;  // invariant subspace found
        if (m == max_steps) break;
        beta.push_back(b);
        linalg::scale(w, 1.0 / b);
        basis.push_back(w);

        if (m % check_every == 0 && m >= 8) {
            // Ritz residual estimates from the tridiagonal eigenproblem
            Matrix t(m, m);
            for (std::size_t i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m) {
                    t(i, i + 1) = beta[i];
                    t(i + 1, i) = beta[i];
                }
            }
            EigResult small = sym_eig(t);
            const double resid1 = std::fabs(b * small.vectors(m - 1, 0));
            const double resid2 = m > 1 ? std::fabs(b * small.vectors(m - 1, 1)) : 1.0;
            const double scale_ref = std::fabs(small.values[0]) + 1e-300;
            if (resid1 <= 1e-11 * scale_ref && resid2 <= 1e-9 * scale_ref) break;
        }
    }

    Matrix t(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) {
            t(i, i + 1) = beta[i];
            t(i + 1, i) = beta[i];
        }
    }
    EigResult small = sym_eig(t);
    out.theta1 = small.values[0];
    out.theta2 = m > 1 ? small.values[1] : small.values[0];
    out.steps = static_cast<int>(m);
    out.y1.assign(dim, 0.0);
    out.y2.assign(dim, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        linalg::axpy(small.vectors(j, 0), basis[j], out.y1);
        if (m > 1) linalg::axpy(small.vectors(j, 1), basis[j], out.y2);
    }
    linalg::normalize(out.y1);
    if (m > 1) linalg::normalize(out.y2);
    return out;
}

// dual eigenvector y (unit) with eigenvalue lambda -> primal unit eigenvector
Vector dual_to_primal(const Matrix& x, const Vector& y) {
    Vector v = linalg::matvec_transposed(x, y);
    const double norm = linalg::norm2(v);
    if (norm > 0.0) linalg::scale(v, 1.0 / norm);
    return v;
}

}  // namespace

TopSpectrum sample_top_two(const Matrix& x, double scale, std::uint64_t lanczos_stream,
                           std::size_t dense_cutoff) {
    const std::size_t n = x.rows(), p = x.cols();
    if (n < 1 || p < 1) throw PreconditionError("sample_top_two: empty sample matrix");
    const std::size_t small_side = std::min(n, p);
    TopSpectrum out;

    if (small_side <= dense_cutoff) {
        if (n <= p) {
            const Matrix dual = linalg::gram_dual(x, scale);
            EigResult eig = sym_eig_topk(dual, 2);
            out.lambda1 = eig.values[0];
            out.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
            Vector y1(n), y2(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) y1[i] = eig.vectors(i, 0);
            if (eig.vectors.cols() > 1)
                for (std::size_t i = 0; i < n; ++i) y2[i] = eig.vectors(i, 1);
            out.v1 = dual_to_primal(x, y1);
            out.v2 = dual_to_primal(x, y2);
        } else {
            const Matrix cov = linalg::gram(x, scale);
            EigResult eig = sym_eig_topk(cov, 2);
            out.lambda1 = eig.values[0];
            out.lambda2 = eig.values.size() > 1 ? eig.values[1] : 0.0;
            out.v1.assign(p, 0.0);
            out.v2.assign(p, 0.0);
            for (std::size_t i = 0; i < p; ++i) out.v1[i] = eig.vectors(i, 0);
            if (eig.vectors.cols() > 1)
                for (std::size_t i = 0; i < p; ++i) out.v2[i] = eig.vectors(i, 1);
        }
        return out;
    }

    const std::size_t max_steps = std::min<std::size_t>(small_side, 260);
    if (n <= p) {
        auto op = [&](const Vector& w) { return dual_op(x, scale, w); };
        LanczosResult lr = lanczos_top_two(op, n, lanczos_stream, max_steps);
        out.lambda1 = lr.theta1;
        out.lambda2 = lr.theta2;
        out.v1 = dual_to_primal(x, lr.y1);
        out.v2 = dual_to_primal(x, lr.y2);
        out.lanczos_steps = lr.steps;
    } else {
        auto op = [&](const Vector& v) { return primal_op(x, scale, v); };
        LanczosResult lr = lanczos_top_two(op, p, lanczos_stream, max_steps);
        out.lambda1 = lr.theta1;
        out.lambda2 = lr.theta2;
        out.v1 = lr.y1;
        out.v2 = lr.y2;
        out.lanczos_steps = lr.steps;
    }
    return out;
}

double sample_spectral_norm(const Matrix& x, double scale, std::uint64_t lanczos_stream,
                            std::size_t dense_cutoff) {
    const std::size_t n = x.rows(), p = x.cols();
    const std::size_t small_side = std::min(n, p);
    if (small_side <= dense_cutoff) {
        const Matrix g = (n <= p) ? linalg::gram_dual(x, scale) : linalg::gram(x, scale);
        return sym_eigvals(g)[0];
    }
    return sample_top_two(x, scale, lanczos_stream, dense_cutoff).lambda1;
}

}  // namespace spikepca
