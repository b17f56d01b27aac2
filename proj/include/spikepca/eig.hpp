#pragma once

#include "spikepca/linalg.hpp"
#include "spikepca/model.hpp"

namespace spikepca {

/// Eigenvalues descending; eigenvectors as matrix columns (may hold fewer
/// columns than eigenvalues when only the leading ones were requested).
struct EigResult {
    Vector values;
    Matrix vectors;
};

/// Full symmetric eigendecomposition: Householder tridiagonalization followed
/// by implicit-shift QL. Deterministic; ties sorted stably so diagonal inputs
/// keep coordinate order. Throws NotSymmetric if max|M - M^T| exceeds
/// 1e-10 * max(1, max|M|).
EigResult sym_eig(const Matrix& m);

/// Eigenvalues only (descending).
Vector sym_eigvals(const Matrix& m);

/// All eigenvalues plus the leading k eigenvectors (inverse iteration on the
/// tridiagonal form, back-transformed). Much cheaper than sym_eig for large p.
EigResult sym_eig_topk(const Matrix& m, std::size_t k);

/// Top eigenpair summary of a symmetric matrix.
struct PcaResult {
    double lambda_pca = 0.0;
    Vector v_pca;
    double lambda2 = 0.0;
    double sin_theta = 0.0;  // against e1
    double overlap = 0.0;    // |<v_pca, e1>|
};

/// Sign fixed so <v_pca, e1> >= 0.
PcaResult top_pair(const Matrix& m);

/// Closed-form nonzero eigenpair of the rank-2 matrix L0 + sigma*L1.
struct Rank2Pair {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    Vector v_plus;
    double normalization = 1.0;  // Z >= 1
};

Rank2Pair rank2_pair(const CovarianceDecomposition& decomp, double sigma);

namespace detail {

/// Householder reduction to tridiagonal form; reflectors retained for
/// applying/accumulating Q.
struct Tridiagonal {
    Vector d;       // n diagonal entries
    Vector e;       // n-1 off-diagonal entries, e[i] couples i and i+1
    Matrix house;   // reflector tails stored below the diagonal
    Vector tau;
};

Tridiagonal tridiagonalize(const Matrix& m);
void apply_q(const Tridiagonal& t, Vector& x);  // x <- Q x
Matrix accumulate_q(const Tridiagonal& t);

/// Implicit-shift QL on (d, e); z, when non-null, has its columns rotated
/// along. e is destroyed. Returns false only on iteration-limit failure.
bool ql_implicit(Vector& d, Vector& e, Matrix* z);

/// Solve (T - mu I) x = rhs for symmetric tridiagonal T, partial pivoting.
void solve_shifted_tridiagonal(const Vector& d, const Vector& e, double mu, Vector& x);

}  // namespace detail
}  // namespace spikepca
