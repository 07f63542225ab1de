#pragma once

// Dense complex linear algebra for the small (dim <= 64) operators used
// throughout the simulator.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evanescent::linalg {

using Complex = std::complex<double>;

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim);
  explicit ComplexVector(std::vector<Complex> entries);

  /// Unit vector e_k.
  static ComplexVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t i) { return entries_[i]; }
  const Complex& operator()(std::size_t i) const { return entries_[i]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  double norm() const;
  bool all_finite() const;

  /// Entries [offset, offset + count).
  ComplexVector segment(std::size_t offset, std::size_t count) const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex scale);

  bool operator==(const ComplexVector&) const = default;

 private:
  std::vector<Complex> entries_;
};

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs);
ComplexVector operator*(Complex scale, ComplexVector v);

/// <a|b>, antilinear in the first argument.
Complex dot(const ComplexVector& a, const ComplexVector& b);

/// Row-major dense complex matrix. A default-constructed matrix is empty
/// (0x0) and only serves as a placeholder; every sized constructor requires
/// rows >= 1 and cols >= 1.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix block(std::size_t row, std::size_t col, std::size_t n_rows, std::size_t n_cols) const;
  void set_block(std::size_t row, std::size_t col, const ComplexMatrix& value);

  Complex trace() const;
  double max_abs() const;
  /// Maximum absolute column sum.
  double norm1() const;
  double frobenius() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

/// |a><b|
ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Solves A X = B by LU with partial pivoting. Throws NumericalError when A
/// is singular to working precision.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

/// e^M by scaling and squaring with the degree-13 Pade approximant.
ComplexMatrix expm(const ComplexMatrix& m);

struct EigenDecomposition {
  std::vector<Complex> values;
  /// Column k is the unit-norm right eigenvector for values[k].
  ComplexMatrix vectors;
};

/// Eigenvalues from the complex Schur form (Hessenberg reduction followed by
/// shifted QR). No eigenvector or defectiveness checks.
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

/// Full eigendecomposition. Every pair satisfies |M v - lambda v| <= 1e-9
/// max(1, |M|_F); a matrix whose eigenvectors do not reconstruct M is
/// reported as NearDefectiveError.
EigenDecomposition eig(const ComplexMatrix& m);

using MatrixFunction = std::function<ComplexMatrix(double)>;

/// Composite Simpson rule over [a, b] with n (even) subintervals, entrywise.
ComplexMatrix integrate_matrix(const MatrixFunction& f, double a, double b, std::size_t n);

}  // namespace evanescent::linalg
