#pragma once

// Shared helpers for the test binaries: seeded random systems and the
// independent oracles (Taylor-series exponential, RK4 propagation).

#include <cmath>
#include <cstdint>
#include <random>

#include "evanescent/linalg.hpp"
#include "evanescent/model.hpp"

namespace evanescent::testing {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  Complex complex_in_disc(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
    return std::polar(r, phi);
  }

 private:
  std::mt19937_64 engine_;
};

inline ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double radius = 1.0) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_in_disc(radius);
  return m;
}

inline ComplexVector random_unit_vector(Rng& rng, std::size_t dim) {
  ComplexVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
  v *= 1.0 / v.norm();
  return v;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n, double scale) {
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = scale * rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = scale * Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

/// Random system whose decay rates satisfy Gamma_n / max|c| in
/// [ratio_lo, ratio_hi] and whose coupled rates lie within a factor
/// `spread` of each other.
inline model::BlockSystem random_system(Rng& rng, std::size_t dim_a, std::size_t dim_b, double ratio_lo = 10.0,
                                        double ratio_hi = 30.0, double spread = 3.0) {
  model::BlockSystem sys;
  sys.dim_a = dim_a;
  sys.dim_b = dim_b;
  sys.b_block = random_hermitian(rng, dim_b, 0.25);
  sys.c_block = random_matrix(rng, dim_a, dim_b, 0.35);
  const double c_max = sys.c_block.max_abs();
  const double base = c_max * rng.uniform(ratio_lo, ratio_hi / spread);
  for (std::size_t n = 0; n < dim_a; ++n) {
    sys.omegas_a.push_back(rng.uniform(-1.0, 1.0));
    sys.gammas_a.push_back(base * rng.uniform(1.0, spread));
  }
  return sys;
}

/// The fig2a three-level system.
inline model::BlockSystem paper_system(double gamma = 5.0, double g = 0.5) {
  model::BlockSystem sys;
  sys.dim_a = 1;
  sys.dim_b = 2;
  sys.omegas_a = {0.0};
  sys.gammas_a = {gamma};
  sys.b_block = ComplexMatrix(2, 2, {0.0, g, g, 1.0});
  sys.c_block = ComplexMatrix(1, 2, {0.5, 0.5});
  return sys;
}

/// e^M by an order-30 Taylor series after scaling to norm <= 0.5.
inline ComplexMatrix taylor_expm(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  double norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(m(i, j));
    norm = std::max(norm, col);
  }
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const ComplexMatrix scaled = std::ldexp(1.0, -squarings) * ComplexMatrix(m);
  ComplexMatrix term = ComplexMatrix::identity(n);
  ComplexMatrix sum = ComplexMatrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = (1.0 / k) * (term * scaled);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// psi(t) for d psi/dt = -i H psi by classical RK4 with step h.
inline ComplexVector rk4_propagate(const ComplexMatrix& h, ComplexVector psi, double t, double step) {
  const Complex minus_i(0.0, -1.0);
  auto rhs = [&](const ComplexVector& v) { return minus_i * (h * v); };
  const auto n_steps = static_cast<std::size_t>(std::llround(t / step));
  const double dt = n_steps > 0 ? t / static_cast<double>(n_steps) : 0.0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const ComplexVector k1 = rhs(psi);
    const ComplexVector k2 = rhs(psi + Complex(dt / 2) * k1);
    const ComplexVector k3 = rhs(psi + Complex(dt / 2) * k2);
    const ComplexVector k4 = rhs(psi + Complex(dt) * k3);
    psi += Complex(dt / 6) * (k1 + Complex(2) * k2 + Complex(2) * k3 + k4);
  }
  return psi;
}

}  // namespace evanescent::testing
