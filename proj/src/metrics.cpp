#include "evanescent/metrics.hpp"

#include <cmath>
#include <limits>

#include "evanescent/errors.hpp"
#include "evanescent/ewa.hpp"

namespace evanescent::metrics {

using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

constexpr Complex kMinusI{0.0, -1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_state(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  model::require_valid(sys);
  if (psi0.dim() != sys.dim()) throw DimensionError("fidelity: state dimension does not match system");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw ValidationError("fidelity: initial state must have unit norm");
  if (!(t >= 0.0)) throw ValidationError("fidelity: t must be >= 0");
}

ComplexVector exact_b(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  return model::b_part(sys, linalg::expm((kMinusI * t) * model::full_hamiltonian(sys)) * psi0);
}

ComplexVector propagate_b(const ComplexMatrix& generator, const BlockSystem& sys, const ComplexVector& psi0, double t) {
  return linalg::expm((kMinusI * t) * generator) * model::b_part(sys, psi0);
}

std::optional<double> normalized(const ComplexVector& exact, const ComplexVector& other) {
  const double n1 = exact.norm();
  const double n2 = other.norm();
  if (n1 < kDenominatorGuard || n2 < kDenominatorGuard) return std::nullopt;
  return std::abs(linalg::dot(exact, other)) / (n1 * n2);
}

}  // namespace

std::optional<double> f_ewa(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  require_state(sys, psi0, t);
  return normalized(exact_b(sys, psi0, t), propagate_b(ewa::hb_ewa(sys).matrix, sys, psi0, t));
}

double f_z(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  require_state(sys, psi0, t);
  return std::abs(linalg::dot(exact_b(sys, psi0, t), propagate_b(sys.b_block, sys, psi0, t)));
}

std::optional<double> f_zn(const BlockSystem& sys, const ComplexVector& psi0, double t) {
  require_state(sys, psi0, t);
  return normalized(exact_b(sys, psi0, t), propagate_b(sys.b_block, sys, psi0, t));
}

FidelitySeries fidelity_series(const BlockSystem& sys, const dynamics::Trajectory& exact,
                               const dynamics::Trajectory& ewa, const dynamics::Trajectory& uncoupled) {
  if (exact.size() != ewa.size() || exact.size() != uncoupled.size())
    throw DimensionError("fidelity_series: trajectories have different lengths");
  FidelitySeries out;
  const std::size_t n = exact.size();
  out.times = exact.times;
  out.f_ewa.reserve(n);
  out.f_z.reserve(n);
  out.f_zn.reserve(n);
  out.flags.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (ewa.times[k] != exact.times[k] || uncoupled.times[k] != exact.times[k])
      throw ValidationError("fidelity_series: trajectories use different time grids");
    const ComplexVector b = model::b_part(sys, exact.states[k]);
    std::uint32_t flags = kFlagNone;

    const auto ewa_value = normalized(b, ewa.states[k]);
    if (!ewa_value) flags |= kFlagEwaUndefined;
    const auto zn_value = normalized(b, uncoupled.states[k]);
    if (!zn_value) flags |= kFlagZnUndefined;

    out.f_ewa.push_back(ewa_value.value_or(kNaN));
    out.f_z.push_back(std::abs(linalg::dot(b, uncoupled.states[k])));
    out.f_zn.push_back(zn_value.value_or(kNaN));
    out.flags.push_back(flags);
  }
  return out;
}

FidelitySeries fidelity_series(const BlockSystem& sys, const ComplexVector& psi0, std::span<const double> times) {
  require_state(sys, psi0, 0.0);
  const ComplexVector psi_b0 = model::b_part(sys, psi0);
  return fidelity_series(sys, dynamics::evolve_exact(sys, psi0, times), dynamics::evolve_ewa(sys, psi_b0, times),
                         dynamics::evolve_uncoupled(sys, psi_b0, times));
}

}  // namespace evanescent::metrics
