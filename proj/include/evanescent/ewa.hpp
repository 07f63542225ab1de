#pragma once

// Evanescent-wave effective Hamiltonian.
//
// Closed form for the B-block dressing
//
//   (D_B)_{m m'} = sum_n conj(c_{nm}) c_{nm'} / (Gamma_n + i (omega_n - omega_{m'}))
//
// and a quadrature evaluation of the window integrals it is the limit of,
//
//   D_B = e^{-i H0 dt} C_down(t+dt) [ int_t^{t+dt} C_up(eta) d eta ] e^{i H0 dt}
//   D_A = e^{-i H0 dt} C_up(t+dt)   [ int_t^{t+dt} C_down(eta) d eta ] e^{i H0 dt}
//
// with C_up(s) = e^{i H0 (s-t)} C e^{-i H0 (s-t)} and C_down likewise for C^dag.

#include <cstddef>

#include "evanescent/linalg.hpp"
#include "evanescent/model.hpp"

namespace evanescent::ewa {

using linalg::ComplexMatrix;
using model::BlockSystem;

/// Largest Gamma_n dt accepted by the quadrature route; the window integrals
/// contain e^{+Gamma_n dt} factors.
inline constexpr double kMaxGammaWindow = 200.0;

/// |Gamma_n + i(omega_n - omega_m')| below this is a singular configuration.
inline constexpr double kSingularDenominator = 1e-12;

inline constexpr double kDefaultDeltaTFactor = 30.0;
inline constexpr std::size_t kDefaultQuadratureN = 2000;

struct EwaConfig {
  double delta_t = 0.0;
  std::size_t quadrature_n = kDefaultQuadratureN;
};

/// B-block generator used inside the interaction picture of the quadrature.
enum class InteractionFrame {
  /// diag(B): bare B energies, the frame in which the closed form is the
  /// exact large-window limit.
  bare,
  /// the full B block, couplings included.
  block,
};

struct EffectiveHamiltonianB {
  ComplexMatrix matrix;  // B - i d_b
  ComplexMatrix d_b;
};

struct DressingBlocks {
  ComplexMatrix d_a;  // dim_a x dim_a
  ComplexMatrix d_b;  // dim_b x dim_b
};

/// Smallest Gamma_n over A levels with a nonzero row of C; 0 if no level is
/// coupled.
double min_coupled_gamma(const BlockSystem& sys);

/// Window dt = factor / min_coupled_gamma(sys). Throws ValidationError when a
/// coupled level has Gamma_n = 0 (no evanescent window exists).
EwaConfig default_config(const BlockSystem& sys, double delta_t_factor = kDefaultDeltaTFactor,
                         std::size_t quadrature_n = kDefaultQuadratureN);

void require_valid(const EwaConfig& cfg);

ComplexMatrix db_ewa(const BlockSystem& sys);

EffectiveHamiltonianB hb_ewa(const BlockSystem& sys);

ComplexMatrix db_numeric(const BlockSystem& sys, const EwaConfig& cfg,
                         InteractionFrame frame = InteractionFrame::bare);
ComplexMatrix da_numeric(const BlockSystem& sys, const EwaConfig& cfg,
                         InteractionFrame frame = InteractionFrame::bare);
DressingBlocks d_blocks_numeric(const BlockSystem& sys, const EwaConfig& cfg,
                                InteractionFrame frame = InteractionFrame::bare);

/// [[A - i D_A, C], [0, B - i D_B]] with the quadrature dressings.
ComplexMatrix heff_full(const BlockSystem& sys, const EwaConfig& cfg,
                        InteractionFrame frame = InteractionFrame::bare);

/// max|a - b| / max|reference|; absolute difference when the reference is zero.
double relative_max_norm_diff(const ComplexMatrix& value, const ComplexMatrix& reference);

}  // namespace evanescent::ewa
