#pragma once

// Fidelities between the B component of the exact state e^{-iHt}psi(0) and
//   F_EWA: the H_B^EWA-evolved B component, normalized by both norms;
//   F_Z:   the B-evolved B component, unnormalized;
//   F_ZN:  the same overlap normalized by both norms.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evanescent/dynamics.hpp"
#include "evanescent/linalg.hpp"
#include "evanescent/model.hpp"

namespace evanescent::metrics {

using linalg::ComplexVector;
using model::BlockSystem;

/// Norm factors below this leave a normalized fidelity undefined.
inline constexpr double kDenominatorGuard = 1e-12;

enum FidelityFlag : std::uint32_t {
  kFlagNone = 0,
  kFlagEwaUndefined = 1u << 0,
  kFlagZnUndefined = 1u << 1,
};

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> f_ewa;  // NaN where flagged
  std::vector<double> f_z;
  std::vector<double> f_zn;   // NaN where flagged
  std::vector<std::uint32_t> flags;

  std::size_t size() const noexcept { return times.size(); }
};

/// std::nullopt when a denominator factor is below kDenominatorGuard.
std::optional<double> f_ewa(const BlockSystem& sys, const ComplexVector& psi0, double t);
double f_z(const BlockSystem& sys, const ComplexVector& psi0, double t);
std::optional<double> f_zn(const BlockSystem& sys, const ComplexVector& psi0, double t);

/// Series from precomputed trajectories: `exact` on the full space,
/// `ewa` and `uncoupled` on B, all on the same grid.
FidelitySeries fidelity_series(const BlockSystem& sys, const dynamics::Trajectory& exact,
                               const dynamics::Trajectory& ewa, const dynamics::Trajectory& uncoupled);

FidelitySeries fidelity_series(const BlockSystem& sys, const ComplexVector& psi0, std::span<const double> times);

}  // namespace evanescent::metrics
