#pragma once

#include <string>

#include "spikepca/eig.hpp"
#include "spikepca/linalg.hpp"

namespace spikepca {

/// Symmetric arrowhead matrix: head at (0,0), shaft along the first row and
/// column, tail on the remaining diagonal.
struct ArrowheadMatrix {
    double head = 0.0;
    Vector shaft;  // length p-1
    Vector tail;   // length p-1

    std::size_t dim() const noexcept { return shaft.size() + 1; }
    Matrix dense() const;
};

struct ArrowheadReduction {
    ArrowheadMatrix arrow;
    Matrix basis;  // orthonormal V with V S V^T == arrow.dense()
};

/// Change of basis diagonalizing the trailing (p-1)x(p-1) minor.
ArrowheadReduction arrowhead_reduce(const Matrix& s);

struct SecularOptions {
    double deflation_scale = 1e-14;  // |shaft_j| <= scale*(|head|+max|tail|) deflates
    int max_iterations = 120;
};

/// Eigendecomposition via the secular equation
///   f(lambda) = (lambda - head) - sum_j shaft_j^2 / (lambda - tail_j) = 0
/// with pole interlacing brackets, deflation of negligible shaft entries and
/// merging of coincident tail entries. Eigenvalues descending; eigenvectors
/// orthonormal columns. Throws RootBracketFailure if a bracketed root is not
/// resolved within the iteration cap.
EigResult arrowhead_eig(const ArrowheadMatrix& a, const SecularOptions& opt = {});

/// JSON {"head": h, "shaft": [...], "tail": [...]}.
std::string arrowhead_to_json(const ArrowheadMatrix& a);
ArrowheadMatrix arrowhead_from_json(const std::string& text);

/// {"eigenvalues": [...], "eigenvectors": [[...], ...]} (row-major columns-as-rows).
std::string eig_result_to_json(const EigResult& r, bool include_vectors = true);

}  // namespace spikepca
