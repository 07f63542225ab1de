#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evanescent/linalg.hpp"
#include "evanescent/model.hpp"

namespace evanescent::dynamics {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using model::BlockSystem;

/// States psi(t_k) = e^{-i H t_k} psi0. The first `dim_a` components form the
/// A part for the norm split; dim_a = 0 for B-subspace trajectories.
struct Trajectory {
  std::size_t dim_a = 0;
  std::vector<double> times;
  std::vector<ComplexVector> states;
  std::vector<double> norms_full;
  std::vector<double> norms_a;
  std::vector<double> norms_b;

  std::size_t size() const noexcept { return times.size(); }
};

/// Throws ValidationError unless times start at 0 and strictly increase.
void require_valid_times(std::span<const double> times);

/// Exact propagation by matrix exponentials. Consecutive equal steps reuse
/// one step propagator.
Trajectory evolve(const ComplexMatrix& h, const ComplexVector& psi0, std::span<const double> times,
                  std::size_t dim_a = 0);

/// Full-space trajectory under full_hamiltonian(sys).
Trajectory evolve_exact(const BlockSystem& sys, const ComplexVector& psi0, std::span<const double> times);

/// B-subspace trajectory under H_B^EWA; norms_a are identically zero.
Trajectory evolve_ewa(const BlockSystem& sys, const ComplexVector& psi_b0, std::span<const double> times);

/// B-subspace trajectory under the bare B block (C = 0 dynamics).
Trajectory evolve_uncoupled(const BlockSystem& sys, const ComplexVector& psi_b0, std::span<const double> times);

/// Per-level bound on |<a_n|psi_A(t)>|:
///   e^{-Gamma_n t} |<a_n|psi_A(0)>| + (1 - e^{-Gamma_n t}) / Gamma_n * sum_m |c_nm|.
/// A level with Gamma_n = 0 uses the limit t * sum_m |c_nm|.
std::vector<double> psi_a_level_bounds(const BlockSystem& sys, const ComplexVector& psi0, double t);

/// Euclidean combination of the per-level bounds, an upper estimate of |psi_A(t)|.
double psi_a_bound(const BlockSystem& sys, const ComplexVector& psi0, double t);

}  // namespace evanescent::dynamics
