#include "doctest.h"

#include <cmath>

#include "evanescent/dynamics.hpp"
#include "evanescent/errors.hpp"
#include "evanescent/lindblad.hpp"
#include "evanescent/model.hpp"
#include "support.hpp"

using namespace evanescent;
using namespace evanescent::linalg;
using evanescent::testing::paper_system;
using lindblad::DensityMatrix;

namespace {

// One A level (index 0) decaying into one G level (index 2); B (index 1) idle.
lindblad::LindbladModel single_decay(double rate) {
  lindblad::LindbladModel m;
  m.dim_a = 1;
  m.dim_b = 1;
  m.dim_g = 1;
  m.h_s = ComplexMatrix(3, 3);
  ComplexMatrix x(3, 3);
  x(2, 0) = 1.0;
  m.jumps.push_back({x, rate});
  return m;
}

std::vector<double> grid(double t_max, std::size_t n) {
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(n);
  return t;
}

DensityMatrix random_density(testing::Rng& rng, std::size_t n) {
  const ComplexMatrix a = testing::random_matrix(rng, n, n);
  ComplexMatrix rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

DensityMatrix pure_state(const ComplexVector& psi) { return outer(psi, psi); }

}  // namespace

TEST_CASE("model validation") {
  const auto emb = lindblad::embed(paper_system());
  CHECK(lindblad::validate(emb.model).empty());

  auto bad = emb.model;
  bad.h_s(0, 1) = 1.0;
  CHECK(!lindblad::validate(bad).empty());

  bad = emb.model;
  bad.h_s(0, 3) = bad.h_s(3, 0) = 0.2;  // coherent A-G coupling
  CHECK(!lindblad::validate(bad).empty());

  bad = emb.model;
  bad.jumps[0].op(0, 3) = 1.0;  // leaks G back into A
  CHECK(!lindblad::validate(bad).empty());

  bad = emb.model;
  bad.jumps[0].rate = -1.0;
  CHECK(!lindblad::validate(bad).empty());
  CHECK_THROWS_AS(lindblad::require_valid(bad), ValidationError);
}

TEST_CASE("right-hand side limits") {
  testing::Rng rng(5);
  auto closed = lindblad::embed(paper_system());
  for (auto& j : closed.model.jumps) j.rate = 0.0;
  const DensityMatrix rho = random_density(rng, 4);
  const ComplexMatrix& h = closed.model.h_s;
  CHECK(max_abs_diff(lindblad::lindblad_rhs(closed.model, rho), Complex(0, -1) * (h * rho - rho * h)) < 1e-15);

  const double gamma = 0.7;
  const auto decay = single_decay(gamma);
  const ComplexMatrix rhs = lindblad::lindblad_rhs(decay, pure_state(ComplexVector::basis(3, 0)));
  CHECK(max_abs_diff(rhs, ComplexMatrix::diagonal(std::vector<Complex>{-gamma, 0.0, gamma})) < 1e-16);

  CHECK_THROWS_AS(lindblad::lindblad_rhs(decay, ComplexMatrix(4, 4)), DimensionError);
}

TEST_CASE("right-hand side is traceless") {
  testing::Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = testing::random_system(rng, rng.index(1, 3), rng.index(1, 3), 1.0, 5.0);
    auto emb = lindblad::embed(sys);
    emb.model.h_s += [&] {
      ComplexMatrix h(emb.model.dim(), emb.model.dim());
      h.set_block(0, 0, emb.h_i_ab);
      return h;
    }();
    const DensityMatrix rho = random_density(rng, emb.model.dim());
    CHECK(std::abs(lindblad::lindblad_rhs(emb.model, rho).trace()) < 1e-12);
  }
}

TEST_CASE("integration in the closed and pure-decay limits") {
  testing::Rng rng(6);
  auto closed = lindblad::embed(paper_system());
  for (auto& j : closed.model.jumps) j.rate = 0.0;
  const auto times = grid(2.0, 10);
  const auto traj = lindblad::integrate(closed.model, random_density(rng, 4), times);
  for (const auto& rho : traj.states) CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
  CHECK(traj.step <= 1e-3);

  const double gamma = 1.5;
  const auto decay = lindblad::integrate(single_decay(gamma), pure_state(ComplexVector::basis(3, 0)), times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(std::abs(decay.states[k](0, 0).real() - std::exp(-gamma * times[k])) < 1e-8);
}

TEST_CASE("integration preserves trace and Hermiticity and fills G monotonically") {
  const auto sys = paper_system();
  const auto emb = lindblad::embed(sys);
  auto driven = emb.model;
  ComplexMatrix hi(driven.dim(), driven.dim());
  hi.set_block(0, 0, emb.h_i_ab);
  driven.h_s += hi;
  const ComplexVector psi({0.3, 0.4, Complex(0.0, std::sqrt(0.75))});
  const auto traj = lindblad::integrate(driven, lindblad::embed_density(driven, pure_state(psi)), grid(3.0, 30));
  double previous = -1.0;
  for (const auto& rho : traj.states) {
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
    CHECK(max_abs_diff(rho, rho.adjoint()) < 1e-10);
    const double g_pop = rho(3, 3).real();
    CHECK(g_pop >= previous - 1e-12);
    previous = g_pop;
  }
}

TEST_CASE("integrator input checks") {
  const auto decay = single_decay(1.0);
  CHECK_THROWS_AS(lindblad::integrate(decay, ComplexMatrix::diagonal(std::vector<Complex>{1.5, 0.0, -0.5}), grid(1.0, 2)),
                  ValidationError);
  CHECK_THROWS_AS(lindblad::integrate(decay, ComplexMatrix(4, 4), grid(1.0, 2)), DimensionError);
  lindblad::IntegratorOptions opts;
  opts.max_step = 0.0;
  CHECK_THROWS_AS(lindblad::integrate(decay, pure_state(ComplexVector::basis(3, 0)), grid(1.0, 2), opts),
                  ValidationError);
}

TEST_CASE("reduction to the non-Hermitian generator") {
  const double gamma = 0.8;
  const auto one = single_decay(gamma);
  const ComplexMatrix h1 = lindblad::reduced_nhh(one, ComplexMatrix(2, 2));
  CHECK(std::abs(h1(0, 0) - Complex(0, -gamma / 2)) < 1e-16);

  auto two = one;
  two.jumps.push_back({one.jumps[0].op, 0.5});
  const ComplexMatrix h2 = lindblad::reduced_nhh(two, ComplexMatrix(2, 2));
  CHECK(std::abs(h2(0, 0) - Complex(0, -(gamma + 0.5) / 2)) < 1e-16);

  auto bad = one;
  bad.jumps[0].op(0, 2) = 1.0;
  CHECK_THROWS_AS(lindblad::reduced_nhh(bad, ComplexMatrix(2, 2)), ValidationError);
}

TEST_CASE("round trip through the embedding") {
  testing::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sys = testing::random_system(rng, rng.index(1, 3), rng.index(1, 3));
    const auto emb = lindblad::embed(sys);
    CHECK(max_abs_diff(lindblad::reduced_nhh(emb.model, emb.h_i_ab), model::full_hamiltonian(sys)) < 1e-15);
  }
}

TEST_CASE("non-Hermitian density evolution") {
  testing::Rng rng(2);
  const ComplexMatrix h = testing::random_hermitian(rng, 3, 1.0);
  const auto times = grid(4.0, 8);
  const auto unitary = lindblad::nhh_density_evolve(h, random_density(rng, 3), times);
  for (const auto& rho : unitary) CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);

  const auto sys = paper_system();
  const ComplexMatrix hf = model::full_hamiltonian(sys);
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  const auto rhos = lindblad::nhh_density_evolve(hf, pure_state(psi0), times);
  const auto traj = dynamics::evolve(hf, psi0, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(max_abs_diff(rhos[k], pure_state(traj.states[k])) < 1e-14);
}

TEST_CASE("trace distance") {
  const DensityMatrix a = pure_state(ComplexVector::basis(2, 0));
  const DensityMatrix b = pure_state(ComplexVector::basis(2, 1));
  CHECK(std::abs(lindblad::trace_distance(a, b) - 1.0) < 1e-15);
  CHECK(lindblad::trace_distance(a, a) == 0.0);
  const ComplexVector plus({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  CHECK(std::abs(lindblad::trace_distance(a, pure_state(plus)) - 1.0 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("equivalence of the projected master equation") {
  const auto sys = paper_system();
  const auto emb = lindblad::embed(sys);
  const ComplexVector psi0 = ComplexVector::basis(3, 2);
  const auto rho0 = lindblad::embed_density(emb.model, pure_state(psi0));
  const auto times = grid(5.0, 50);
  CHECK(lindblad::equivalence_check(emb.model, emb.h_i_ab, rho0, times) <= 1e-6);

  auto closed_sys = paper_system(0.0);
  closed_sys.c_block = ComplexMatrix(1, 2);
  const auto closed = lindblad::embed(closed_sys);
  const auto closed_rho0 = lindblad::embed_density(closed.model, pure_state(ComplexVector({0.6, 0.0, 0.8})));
  CHECK(lindblad::equivalence_check(closed.model, closed.h_i_ab, closed_rho0, times) <= 1e-10);

  auto leaking = rho0;
  leaking(3, 3) = 0.1;
  CHECK_THROWS_AS(lindblad::equivalence_check(emb.model, emb.h_i_ab, leaking, times), ValidationError);
}

TEST_CASE("a corrupted reduction is detected") {
  const auto sys = paper_system();
  const auto emb = lindblad::embed(sys);
  const auto rho0 = lindblad::embed_density(emb.model, pure_state(ComplexVector::basis(3, 2)));
  auto halved = sys;
  halved.gammas_a[0] *= 0.5;
  const auto report =
      lindblad::equivalence_report(emb.model, emb.h_i_ab, model::full_hamiltonian(halved), rho0, grid(5.0, 50));
  CHECK(report.max_distance > 1e-3);
}

TEST_CASE("density diagnostics") {
  CHECK(lindblad::density_violations(pure_state(ComplexVector::basis(3, 0))).empty());
  CHECK(!lindblad::density_violations(ComplexMatrix::diagonal(std::vector<Complex>{1.2, -0.2})).empty());
  CHECK(!lindblad::density_violations(ComplexMatrix::diagonal(std::vector<Complex>{0.8, 0.3})).empty());
  CHECK(!lindblad::density_violations(ComplexMatrix(2, 2, {0.5, 0.4, 0.0, 0.5})).empty());
}
