#include "evanescent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "evanescent/errors.hpp"

namespace evanescent::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.empty() || !m.is_square()) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.all_finite()) throw ValidationError(std::string(what) + ": matrix has non-finite entries");
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::size_t dim) : entries_(dim) {
  if (dim == 0) throw DimensionError("ComplexVector: dimension must be >= 1");
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DimensionError("ComplexVector: dimension must be >= 1");
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t k) {
  ComplexVector v(dim);
  if (k >= dim) throw DimensionError("ComplexVector::basis: index out of range");
  v(k) = 1.0;
  return v;
}

double ComplexVector::norm() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexVector::all_finite() const { return std::all_of(entries_.begin(), entries_.end(), finite); }

ComplexVector ComplexVector::segment(std::size_t offset, std::size_t count) const {
  if (offset + count > dim()) throw DimensionError("ComplexVector::segment: range out of bounds");
  return ComplexVector(std::vector<Complex>(entries_.begin() + static_cast<std::ptrdiff_t>(offset),
                                            entries_.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  if (other.dim() != dim()) throw DimensionError("ComplexVector +=: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  if (other.dim() != dim()) throw DimensionError("ComplexVector -=: dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexVector operator+(ComplexVector lhs, const ComplexVector& rhs) { return lhs += rhs; }
ComplexVector operator-(ComplexVector lhs, const ComplexVector& rhs) { return lhs -= rhs; }
ComplexVector operator*(Complex scale, ComplexVector v) { return v *= scale; }

Complex dot(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("dot: dimension mismatch");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a(i)) * b(i);
  return sum;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("ComplexMatrix: rows and cols must be >= 1");
  if (entries_.size() != rows * cols) {
    std::ostringstream msg;
    msg << "ComplexMatrix: " << entries_.size() << " entries for a " << rows << "x" << cols << " matrix";
    throw DimensionError(msg.str());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t row, std::size_t col, std::size_t n_rows,
                                   std::size_t n_cols) const {
  if (row + n_rows > rows_ || col + n_cols > cols_) throw DimensionError("ComplexMatrix::block: out of bounds");
  ComplexMatrix out(n_rows, n_cols);
  for (std::size_t i = 0; i < n_rows; ++i)
    for (std::size_t j = 0; j < n_cols; ++j) out(i, j) = (*this)(row + i, col + j);
  return out;
}

void ComplexMatrix::set_block(std::size_t row, std::size_t col, const ComplexMatrix& value) {
  if (row + value.rows() > rows_ || col + value.cols() > cols_)
    throw DimensionError("ComplexMatrix::set_block: out of bounds");
  for (std::size_t i = 0; i < value.rows(); ++i)
    for (std::size_t j = 0; j < value.cols(); ++j) (*this)(row + i, col + j) = value(i, j);
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& z : entries_) best = std::max(best, std::abs(z));
  return best;
}

double ComplexMatrix::norm1() const {
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

double ComplexMatrix::frobenius() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexMatrix::all_finite() const { return std::all_of(entries_.begin(), entries_.end(), finite); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("ComplexMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("ComplexMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    std::ostringstream msg;
    msg << "matrix product: " << lhs.rows() << "x" << lhs.cols() << " times " << rhs.rows() << "x" << rhs.cols();
    throw DimensionError(msg.str());
  }
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.dim()) throw DimensionError("matrix-vector product: dimension mismatch");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v(j);
    out(i) = sum;
  }
  return out;
}

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) {
  ComplexMatrix out(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(i, j) = a(i) * std::conj(b(j));
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double best = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) best = std::max(best, std::abs(a.entries()[k] - b.entries()[k]));
  return best;
}

// ---------------------------------------------------------------------------
// LU solve

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "solve");
  if (b.rows() != a.rows()) throw DimensionError("solve: right-hand side has wrong row count");
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  const double scale = std::max(a.max_abs(), std::numeric_limits<double>::min());

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (std::abs(lu(pivot, k)) <= 1e-14 * scale) throw NumericalError("solve: matrix is singular to working precision");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(pivot, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = lu(i, k) / lu(k, k);
      if (factor == Complex{}) continue;
      lu(i, k) = factor;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= factor * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Complex sum = x(kk, j);
      for (std::size_t l = kk + 1; l < n; ++l) sum -= lu(kk, l) * x(l, j);
      x(kk, j) = sum / lu(kk, kk);
    }
  }
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  require_square(a, "inverse");
  return solve(a, ComplexMatrix::identity(a.rows()));
}

// ---------------------------------------------------------------------------
// Matrix exponential

ComplexMatrix expm(const ComplexMatrix& m) {
  require_square(m, "expm");
  require_finite(m, "expm");
  const std::size_t n = m.rows();

  // Degree-13 Pade coefficients and the 1-norm threshold below which the
  // approximant is accurate to unit roundoff.
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = m.norm1();
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  if (squarings > 1000) throw RangeError("expm: norm too large");

  ComplexMatrix a = std::ldexp(1.0, -squarings) * m;
  const ComplexMatrix ident = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  ComplexMatrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  ComplexMatrix u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  ComplexMatrix v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  ComplexMatrix v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  ComplexMatrix result = solve(v - u, v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  if (!result.all_finite()) throw RangeError("expm: result overflowed");
  return result;
}

// ---------------------------------------------------------------------------
// Schur form and eigenproblem

namespace {

struct Schur {
  ComplexMatrix t;  // upper triangular
  ComplexMatrix q;  // unitary, m = q t q^H
};

// Unitary rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s = 0.0;

  static Givens annihilate(Complex a, Complex b) {
    Givens g;
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) return g;
    if (abs_a == 0.0) {
      g.c = 0.0;
      g.s = 1.0;
      return g;
    }
    const double rho = std::hypot(abs_a, abs_b);
    g.c = abs_a / rho;
    g.s = (a / abs_a) * std::conj(b) / rho;
    return g;
  }

  // rows k, k+1 <- G [row k; row k+1], over columns [col_begin, n)
  void apply_left(ComplexMatrix& m, std::size_t k, std::size_t col_begin) const {
    for (std::size_t j = col_begin; j < m.cols(); ++j) {
      const Complex x = m(k, j);
      const Complex y = m(k + 1, j);
      m(k, j) = c * x + s * y;
      m(k + 1, j) = -std::conj(s) * x + c * y;
    }
  }

  // columns k, k+1 <- [col k, col k+1] G^H, over rows [0, row_end)
  void apply_right(ComplexMatrix& m, std::size_t k, std::size_t row_end) const {
    for (std::size_t i = 0; i < row_end; ++i) {
      const Complex x = m(i, k);
      const Complex y = m(i, k + 1);
      m(i, k) = c * x + std::conj(s) * y;
      m(i, k + 1) = -s * x + c * y;
    }
  }
};

void hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
  const std::size_t n = h.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha_norm += std::norm(h(i, k));
    alpha_norm = std::sqrt(alpha_norm);
    if (alpha_norm == 0.0) continue;

    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
    const Complex alpha = -phase * alpha_norm;

    std::vector<Complex> v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double v_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) v_norm += std::norm(v[i]);
    v_norm = std::sqrt(v_norm);
    if (v_norm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= v_norm;

    // h <- (I - 2 v v^H) h
    for (std::size_t j = 0; j < n; ++j) {
      Complex proj = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) proj += std::conj(v[i]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * proj;
    }
    // h <- h (I - 2 v v^H), q <- q (I - 2 v v^H)
    for (ComplexMatrix* target : {&h, &q}) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex proj = 0.0;
        for (std::size_t l = k + 1; l < n; ++l) proj += (*target)(i, l) * v[l];
        for (std::size_t l = k + 1; l < n; ++l) (*target)(i, l) -= 2.0 * proj * std::conj(v[l]);
      }
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalue of the trailing 2x2 block of the active window closest to its
// bottom-right entry.
Complex wilkinson_shift(const ComplexMatrix& t, std::size_t iu) {
  const Complex a = t(iu - 1, iu - 1);
  const Complex b = t(iu - 1, iu);
  const Complex c = t(iu, iu - 1);
  const Complex d = t(iu, iu);
  const Complex half_trace = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = half_trace + disc;
  const Complex l2 = half_trace - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

Schur schur(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  Schur out{m, ComplexMatrix::identity(n)};
  ComplexMatrix& t = out.t;
  if (n == 1) return out;
  hessenberg(t, out.q);

  const std::size_t max_iterations = 100 * n;
  std::size_t total = 0;
  std::size_t iter = 0;
  std::size_t iu = n - 1;

  auto negligible = [&t](std::size_t i) {
    const double scale = std::abs(t(i, i)) + std::abs(t(i + 1, i + 1));
    if (std::abs(t(i + 1, i)) <= kEps * scale || std::abs(t(i + 1, i)) < std::numeric_limits<double>::min()) {
      t(i + 1, i) = 0.0;
      return true;
    }
    return false;
  };

  while (true) {
    while (iu > 0 && negligible(iu - 1)) {
      --iu;
      iter = 0;
    }
    if (iu == 0) break;
    if (++total > max_iterations) {
      std::ostringstream msg;
      msg << "eig: QR iteration did not converge after " << total << " sweeps (dimension " << n
          << ", unconverged row " << iu << ", subdiagonal magnitude " << std::abs(t(iu, iu - 1)) << ")";
      throw ConvergenceError(msg.str());
    }
    ++iter;

    std::size_t il = iu - 1;
    while (il > 0 && !negligible(il - 1)) --il;

    Complex shift;
    if (iter == 10 || iter == 30) {
      // exceptional shift
      shift = std::abs(t(iu, iu - 1).real()) + std::abs(t(iu - 1, iu >= 2 ? iu - 2 : 0).real());
    } else {
      shift = wilkinson_shift(t, iu);
    }

    Givens g = Givens::annihilate(t(il, il) - shift, t(il + 1, il));
    g.apply_left(t, il, il);
    g.apply_right(t, il, std::min(il + 2, iu) + 1);
    g.apply_right(out.q, il, n);
    for (std::size_t i = il + 1; i < iu; ++i) {
      g = Givens::annihilate(t(i, i - 1), t(i + 1, i - 1));
      g.apply_left(t, i, i - 1);
      t(i + 1, i - 1) = 0.0;
      g.apply_right(t, i, std::min(i + 2, iu) + 1);
      g.apply_right(out.q, i, n);
    }
  }
  return out;
}

}  // namespace

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  require_finite(m, "eigenvalues");
  const Schur s = schur(m);
  std::vector<Complex> values(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) values[i] = s.t(i, i);
  return values;
}

EigenDecomposition eig(const ComplexMatrix& m) {
  require_square(m, "eig");
  require_finite(m, "eig");
  const std::size_t n = m.rows();
  const Schur s = schur(m);
  const ComplexMatrix& t = s.t;
  const double scale = std::max(m.frobenius(), 1.0);
  const double small = kEps * scale;

  EigenDecomposition out{std::vector<Complex>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) out.values[k] = t(k, k);

  // Back substitution on the triangular factor, then rotate back by q.
  for (std::size_t k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    std::vector<Complex> y(n, 0.0);
    y[k] = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      Complex sum = 0.0;
      for (std::size_t l = j + 1; l <= k; ++l) sum += t(j, l) * y[l];
      Complex denom = t(j, j) - lambda;
      if (std::abs(denom) < small) denom = small;
      y[j] = -sum / denom;
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex v = 0.0;
      for (std::size_t l = 0; l <= k; ++l) v += s.q(i, l) * y[l];
      out.vectors(i, k) = v;
      norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) /= norm;
  }

  for (std::size_t k = 0; k < n; ++k) {
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex r = -out.values[k] * out.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) r += m(i, j) * out.vectors(j, k);
      residual += std::norm(r);
    }
    residual = std::sqrt(residual);
    if (!(residual <= 1e-9 * scale)) {
      std::ostringstream msg;
      msg << "eig: near-defective matrix, eigenpair " << k << " residual " << residual;
      throw NearDefectiveError(msg.str());
    }
  }

  // Collapsed eigenvectors (defective input) still have small residuals but
  // fail to reconstruct m.
  ComplexMatrix reconstructed;
  try {
    reconstructed = out.vectors * ComplexMatrix::diagonal(out.values) * inverse(out.vectors);
  } catch (const NumericalError&) {
    throw NearDefectiveError("eig: near-defective matrix, eigenvector matrix is singular");
  }
  const double mismatch = max_abs_diff(reconstructed, m);
  if (!(mismatch <= 1e-8 * scale)) {
    std::ostringstream msg;
    msg << "eig: near-defective matrix, V diag(lambda) V^-1 differs from input by " << mismatch;
    throw NearDefectiveError(msg.str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

ComplexMatrix integrate_matrix(const MatrixFunction& f, double a, double b, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("integrate_matrix: subdivision count must be even and >= 2");
  if (!(a <= b)) throw ValidationError("integrate_matrix: lower limit exceeds upper limit");
  const double h = (b - a) / static_cast<double>(n);
  ComplexMatrix sum = f(a);
  sum += f(b);
  for (std::size_t k = 1; k < n; ++k) {
    const double weight = (k % 2 == 1) ? 4.0 : 2.0;
    sum += weight * f(a + h * static_cast<double>(k));
  }
  sum *= h / 3.0;
  return sum;
}

}  // namespace evanescent::linalg
