#pragma once

// Block-structured non-Hermitian system
//
//   H = [[A, C], [C^dag, B]],  A = diag(omega_n - i Gamma_n),  B = B^dag,
//
// in units of the B-level spacing epsilon. Basis order is A states first,
// then B states.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "evanescent/linalg.hpp"

namespace evanescent::model {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

struct BlockSystem {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<double> omegas_a;
  std::vector<double> gammas_a;
  ComplexMatrix b_block;  // dim_b x dim_b
  ComplexMatrix c_block;  // dim_a x dim_b

  std::size_t dim() const noexcept { return dim_a + dim_b; }

  bool operator==(const BlockSystem&) const = default;
};

/// Optional sweep axis carried by a scenario.
struct SweepSpec {
  std::string axis;
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
  std::string label;
  BlockSystem system;
  double p_a = 0.0;
  double theta = 0.0;
  /// When set, replaces the (p_a, theta) construction.
  std::optional<std::vector<Complex>> amplitudes;
  double t_max = 20.0;
  std::size_t n_steps = 400;
  double delta_t_factor = 30.0;
  std::size_t quadrature_n = 2000;
  std::optional<SweepSpec> sweep;

  bool operator==(const Scenario&) const = default;
};

/// Tolerance for B = B^dag.
inline constexpr double kHermiticityTolerance = 1e-12;

/// Every invariant violation of the system; empty means valid.
std::vector<std::string> validate(const BlockSystem& sys);

/// Violations of the scenario, including those of its system.
std::vector<std::string> validate(const Scenario& sc);

/// Throws ValidationError listing the violations, if any.
void require_valid(const BlockSystem& sys);
void require_valid(const Scenario& sc);

/// A = diag(omega_n - i Gamma_n).
ComplexMatrix a_block(const BlockSystem& sys);

/// H_0 = diag(A, B).
ComplexMatrix free_hamiltonian(const BlockSystem& sys);

/// H_I = [[0, C], [C^dag, 0]].
ComplexMatrix interaction_hamiltonian(const BlockSystem& sys);

/// H = H_0 + H_I.
ComplexMatrix full_hamiltonian(const BlockSystem& sys);

ComplexMatrix projector_a(const BlockSystem& sys);
ComplexMatrix projector_b(const BlockSystem& sys);

/// Unit-norm initial state. Without explicit amplitudes this is
/// p_A|3> + sqrt(1 - p_A)(cos(theta)|2> + sin(theta)|1>) renormalized, where
/// |3> is the first A state and |1>, |2> the two B states (requires dim_b == 2).
ComplexVector initial_state(const Scenario& sc);

/// Uniform grid t_k = k t_max / n_steps, k = 0..n_steps.
std::vector<double> time_grid(const Scenario& sc);

/// Decoupled sub-blocks of a state: [0, dim_a) and [dim_a, dim).
ComplexVector a_part(const BlockSystem& sys, const ComplexVector& psi);
ComplexVector b_part(const BlockSystem& sys, const ComplexVector& psi);

/// Embeds a B-subspace vector into the full space with zero A components.
ComplexVector embed_b(const BlockSystem& sys, const ComplexVector& psi_b);

}  // namespace evanescent::model
