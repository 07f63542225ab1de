#include "evanescent/dynamics.hpp"

#include <cmath>

#include "evanescent/errors.hpp"
#include "evanescent/ewa.hpp"

namespace evanescent::dynamics {

using linalg::Complex;

namespace {

constexpr Complex kMinusI{0.0, -1.0};

void record(Trajectory& traj, double t, ComplexVector psi) {
  double a2 = 0.0;
  double full2 = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const double p = std::norm(psi(i));
    full2 += p;
    if (i < traj.dim_a) a2 += p;
  }
  traj.times.push_back(t);
  traj.norms_full.push_back(std::sqrt(full2));
  traj.norms_a.push_back(std::sqrt(a2));
  traj.norms_b.push_back(std::sqrt(full2 - a2 > 0.0 ? full2 - a2 : 0.0));
  traj.states.push_back(std::move(psi));
}

}  // namespace

void require_valid_times(std::span<const double> times) {
  if (times.empty()) throw ValidationError("time grid is empty");
  if (times.front() != 0.0) throw ValidationError("time grid must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]) || !std::isfinite(times[k]))
      throw ValidationError("time grid must be finite and strictly increasing");
}

Trajectory evolve(const ComplexMatrix& h, const ComplexVector& psi0, std::span<const double> times,
                  std::size_t dim_a) {
  if (h.empty() || !h.is_square()) throw DimensionError("evolve: generator must be square");
  if (h.rows() != psi0.dim()) throw DimensionError("evolve: generator and state dimensions differ");
  if (dim_a > psi0.dim()) throw DimensionError("evolve: A dimension exceeds state dimension");
  require_valid_times(times);

  Trajectory traj;
  traj.dim_a = dim_a;
  traj.times.reserve(times.size());
  traj.states.reserve(times.size());

  ComplexVector psi = psi0;
  record(traj, 0.0, psi);

  double cached_step = -1.0;
  ComplexMatrix step_propagator;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - cached_step) > 1e-14 * step) {
      step_propagator = linalg::expm((kMinusI * step) * h);
      cached_step = step;
    }
    psi = step_propagator * psi;
    if (!psi.all_finite()) throw NumericalError("evolve: state became non-finite");
    record(traj, times[k], psi);
  }
  return traj;
}

Trajectory evolve_exact(const BlockSystem& sys, const ComplexVector& psi0, std::span<const double> times) {
  return evolve(model::full_hamiltonian(sys), psi0, times, sys.dim_a);
}

Trajectory evolve_ewa(const BlockSystem& sys, const ComplexVector& psi_b0, std::span<const double> times) {
  if (psi_b0.dim() != sys.dim_b) throw DimensionError("evolve_ewa: initial state must live in B");
  return evolve(ewa::hb_ewa(sys).matrix, psi_b0, times, 0);
}

Trajectory evolve_uncoupled(const BlockSystem& sys, const ComplexVector& psi_b0, std::span<const double> times) {
  model::require_valid(sys);
  if (psi_b0.dim() != sys.dim_b) throw DimensionError("evolve_uncoupled: initial state must live in B");
  return evolve(sys.b_block, psi_b0, times, 0);
}

std::vector<double> psi_a_level_bounds(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  model::require_valid(sys);
  if (psi0.dim() != sys.dim()) throw DimensionError("psi_a_bound: state dimension does not match system");
  if (!(t >= 0.0)) throw ValidationError("psi_a_bound: t must be >= 0");

  std::vector<double> bounds(sys.dim_a);
  for (std::size_t n = 0; n < sys.dim_a; ++n) {
    const double gamma = sys.gammas_a[n];
    double coupling = 0.0;
    for (std::size_t m = 0; m < sys.dim_b; ++m) coupling += std::abs(sys.c_block(n, m));
    const double decay = std::exp(-gamma * t);
    const double response = gamma > 0.0 ? -std::expm1(-gamma * t) / gamma : t;
    bounds[n] = decay * std::abs(psi0(n)) + response * coupling;
  }
  return bounds;
}

double psi_a_bound(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  double sum = 0.0;
  for (double b : psi_a_level_bounds(sys, psi0, t)) sum += b * b;
  return std::sqrt(sum);
}

}  // namespace evanescent::dynamics
