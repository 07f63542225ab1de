#include "doctest.h"

#include <cmath>

#include "evanescent/dynamics.hpp"
#include "evanescent/errors.hpp"
#include "evanescent/ewa.hpp"
#include "evanescent/model.hpp"
#include "support.hpp"

using namespace evanescent;
using namespace evanescent::linalg;
using evanescent::testing::paper_system;

namespace {

std::vector<double> grid(double t_max, std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(n);
  return t;
}

}  // namespace

TEST_CASE("null generator and pure decay") {
  const auto times = grid(2.0, 20);
  const ComplexVector psi0 = ComplexVector::basis(2, 0);
  const auto constant = dynamics::evolve(ComplexMatrix(2, 2), psi0, times);
  for (const auto& s : constant.states) CHECK(s == psi0);

  const double gamma = 1.3;
  const auto decay = dynamics::evolve(ComplexMatrix::diagonal(std::vector<Complex>{Complex(0, -gamma), 0.0}), psi0, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(std::abs(decay.norms_full[k] - std::exp(-gamma * times[k])) < 1e-13);
}

TEST_CASE("exact propagation matches an RK4 oracle") {
  const auto sys = paper_system();
  const ComplexMatrix h = model::full_hamiltonian(sys);
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  const std::vector<double> times{0.0, 0.5, 1.0, 2.0};
  const auto traj = dynamics::evolve_exact(sys, psi0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const ComplexVector oracle = testing::rk4_propagate(h, psi0, times[k], 1e-4);
    CHECK(std::abs(traj.norms_full[k] - oracle.norm()) < 1e-7);
    CHECK((traj.states[k] - oracle).norm() < 1e-7);
  }
}

TEST_CASE("norm bookkeeping and monotonicity") {
  testing::Rng rng(44);
  const auto times = grid(10.0, 200);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = testing::random_system(rng, rng.index(1, 3), rng.index(1, 4), 0.5, 20.0);
    const ComplexVector psi0 = testing::random_unit_vector(rng, sys.dim());
    const auto traj = dynamics::evolve_exact(sys, psi0, times);
    REQUIRE(traj.size() == times.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double split = traj.norms_a[k] * traj.norms_a[k] + traj.norms_b[k] * traj.norms_b[k];
      CHECK(std::abs(split - traj.norms_full[k] * traj.norms_full[k]) < 1e-12);
      if (k > 0) CHECK(traj.norms_full[k] <= traj.norms_full[k - 1] + 1e-9);
    }
  }
}

TEST_CASE("semigroup property") {
  testing::Rng rng(9);
  const auto sys = testing::random_system(rng, 2, 3);
  const ComplexVector psi0 = testing::random_unit_vector(rng, sys.dim());
  const std::vector<double> t1{0.0, 1.7};
  const std::vector<double> t2{0.0, 2.9};
  const std::vector<double> t12{0.0, 4.6};
  const auto first = dynamics::evolve_exact(sys, psi0, t1);
  const auto second = dynamics::evolve_exact(sys, first.states.back(), t2);
  const auto direct = dynamics::evolve_exact(sys, psi0, t12);
  CHECK((second.states.back() - direct.states.back()).norm() < 1e-9);
}

TEST_CASE("time grid validation") {
  const auto sys = paper_system();
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  CHECK_THROWS_AS(dynamics::evolve_exact(sys, psi0, std::vector<double>{0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(dynamics::evolve_exact(sys, psi0, std::vector<double>{0.0, 1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(dynamics::evolve_exact(sys, psi0, std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(dynamics::evolve_exact(sys, ComplexVector::basis(2, 0), std::vector<double>{0.0}), DimensionError);
  CHECK_THROWS_AS(dynamics::evolve(ComplexMatrix(2, 3), ComplexVector(3), std::vector<double>{0.0}), DimensionError);
}

TEST_CASE("non-uniform grids") {
  const auto sys = paper_system();
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  const std::vector<double> times{0.0, 0.1, 0.25, 1.0, 3.0};
  const auto traj = dynamics::evolve_exact(sys, psi0, times);
  const ComplexMatrix h = model::full_hamiltonian(sys);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK((traj.states[k] - expm(Complex(0, -times[k]) * h) * psi0).norm() < 1e-12);
}

TEST_CASE("uncoupled B evolution is the Rabi formula") {
  auto sys = paper_system();
  sys.c_block = ComplexMatrix(1, 2);
  const auto times = grid(20.0, 400);
  const auto traj = dynamics::evolve_ewa(sys, ComplexVector::basis(2, 1), times);
  const double g = 0.5, delta = 1.0;
  const double omega = std::sqrt(delta * delta / 4.0 + g * g);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double p1 = g * g / (omega * omega) * std::pow(std::sin(omega * times[k]), 2);
    CHECK(std::abs(std::norm(traj.states[k](0)) - p1) < 1e-12);
    CHECK(traj.norms_a[k] == 0.0);
  }
}

TEST_CASE("EWA evolution at strong damping stays nearly unitary") {
  const auto sys = paper_system(100.0);
  const auto times = grid(20.0, 400);
  const auto traj = dynamics::evolve_ewa(sys, ComplexVector::basis(2, 1), times);
  const auto exact = dynamics::evolve_exact(sys, ComplexVector::basis(3, 2), times);
  // Envelope from the largest eigenvalue of the Hermitian part of D_B.
  const ComplexMatrix db = ewa::db_ewa(sys);
  double rate = 0.0;
  for (Complex v : eigenvalues(Complex(0.5) * (db + db.adjoint()))) rate = std::max(rate, v.real());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(traj.norms_full[k] >= std::exp(-rate * times[k]) - 1e-12);
    CHECK(std::abs(traj.norms_full[k] - exact.norms_b[k]) <= 1e-2);
  }
  CHECK(traj.norms_full.back() < 0.95);
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj.norms_full[k] <= traj.norms_full[k - 1] + 1e-12);
}

TEST_CASE("bound values on the three-level system") {
  const auto sys = paper_system();
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  CHECK(dynamics::psi_a_bound(sys, psi0, 0.0) == 0.0);
  CHECK(std::abs(dynamics::psi_a_bound(sys, psi0, 50.0) - 0.2) < 1e-15);
  // (1 - e^{-5}) / 5 from the per-level formula.
  CHECK(std::abs(dynamics::psi_a_bound(sys, psi0, 1.0) - 0.1986524106001829) < 1e-15);

  const ComplexVector mixed({0.6, 0.0, 0.8});
  const double t = 0.3;
  const double expected = std::exp(-5.0 * t) * 0.6 + (1.0 - std::exp(-5.0 * t)) / 5.0;
  CHECK(std::abs(dynamics::psi_a_bound(sys, mixed, t) - expected) < 1e-15);
}

TEST_CASE("bound does not depend on the A-level frequency") {
  auto sys = paper_system();
  const ComplexVector psi0({0.6, 0.0, 0.8});
  const double reference = dynamics::psi_a_bound(sys, psi0, 0.4);
  sys.omegas_a = {3.0};
  CHECK(dynamics::psi_a_bound(sys, psi0, 0.4) == reference);
  const auto traj = dynamics::evolve_exact(sys, psi0, grid(2.0, 200));
  for (std::size_t k = 0; k < traj.size(); ++k)
    CHECK(traj.norms_a[k] <= dynamics::psi_a_bound(sys, psi0, traj.times[k]) + 1e-12);
}

TEST_CASE("bound with an undamped level uses the linear limit") {
  auto sys = paper_system(0.0);
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  CHECK(std::abs(dynamics::psi_a_level_bounds(sys, psi0, 2.0)[0] - 2.0) < 1e-15);
  sys.gammas_a = {1e-300};
  CHECK(std::abs(dynamics::psi_a_level_bounds(sys, psi0, 2.0)[0] - 2.0) < 1e-12);
}

TEST_CASE("bound dominates exact A amplitude and stays of order c / Gamma") {
  testing::Rng rng(71);
  const auto times = grid(20.0, 400);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = testing::random_system(rng, rng.index(1, 3), rng.index(1, 4), 10.0, 10.0 * (1.0 + 1e-9), 1.0);
    ComplexVector psi_b = testing::random_unit_vector(rng, sys.dim_b);
    const ComplexVector psi0 = model::embed_b(sys, psi_b);
    const auto traj = dynamics::evolve_exact(sys, psi0, times);
    double row_sum = 0.0;
    for (std::size_t n = 0; n < sys.dim_a; ++n) {
      double row = 0.0;
      for (std::size_t m = 0; m < sys.dim_b; ++m) row += std::norm(sys.c_block(n, m));
      row_sum += std::sqrt(row);
    }
    double peak = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      CHECK(traj.norms_a[k] <= dynamics::psi_a_bound(sys, psi0, times[k]) + 1e-12);
      peak = std::max(peak, traj.norms_a[k]);
    }
    CHECK(peak <= 2.0 * row_sum / *std::min_element(sys.gammas_a.begin(), sys.gammas_a.end()));
  }
}
