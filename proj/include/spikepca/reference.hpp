#pragma once

#include "spikepca/linalg.hpp"

namespace spikepca::reference {

// Serial reference implementations. They are kept deliberately independent of
// the OpenMP kernels and of the Householder/QL eigensolver: the tests use
// them as oracles and spikepca_bench compares their runtime against the
// parallel paths.

/// scale * X^T X by the naive triple loop, serial.
Matrix covariance_naive(const Matrix& x, double scale);

/// scale * X X^T, serial.
Matrix gram_dual_serial(const Matrix& x, double scale);

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
/// Eigenvalues descending, eigenvectors as matrix columns.
void jacobi_eig(const Matrix& m, Vector& eigenvalues, Matrix& eigenvectors);

/// det(M) by recursive cofactor expansion; exponential cost, intended for
/// the small characteristic-polynomial oracle only (p <= 8 or so).
double det_expansion(const Matrix& m);

/// det(M - lambda I) via cofactor expansion.
double charpoly_eval(const Matrix& m, double lambda);

/// All roots of det(M - x I) for a small symmetric M, found by sign-change
/// scanning plus bisection inside the Gershgorin interval. Descending.
Vector charpoly_roots(const Matrix& m, std::size_t grid = 20000);

}  // namespace spikepca::reference
