#pragma once

#include <cstddef>
#include <vector>

namespace spikepca {

using Vector = std::vector<double>;

/// Dense row-major matrix. Plain storage, value semantics.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

namespace linalg {

double dot(const double* a, const double* b, std::size_t n) noexcept;
double dot(const Vector& a, const Vector& b) noexcept;
double norm2(const Vector& a) noexcept;
void scale(Vector& a, double s) noexcept;
/// y += s*x
void axpy(double s, const Vector& x, Vector& y) noexcept;
void normalize(Vector& a);

/// y = M x  (parallel over rows; each entry is a fixed-order serial sum, so
/// results are bit-identical for any thread count)
Vector matvec(const Matrix& m, const Vector& x);

/// y = M^T x
Vector matvec_transposed(const Matrix& m, const Vector& x);

Matrix transpose(const Matrix& m);

/// scale * X^T X from the n-by-p sample matrix (OpenMP over output rows).
Matrix gram(const Matrix& x, double scale);

/// scale * X X^T (the n-by-n dual Gram; OpenMP over output rows).
Matrix gram_dual(const Matrix& x, double scale);

double max_abs(const Matrix& m) noexcept;
double max_abs_diff(const Matrix& a, const Matrix& b) noexcept;
double frobenius(const Matrix& m) noexcept;
/// max_{ij} |M_ij - M_ji|
double asymmetry(const Matrix& m) noexcept;

}  // namespace linalg
}  // namespace spikepca
