#pragma once

// Zero-temperature master equation on A (+) B (+) G whose projection onto
// A (+) B is generated by a non-Hermitian Hamiltonian:
//
//   d rho / dt = -i [H_S, rho] + sum_j gamma_j (X_j rho X_j^dag - 1/2 {X_j^dag X_j, rho})
//
// Basis order is A, then B, then G.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "evanescent/linalg.hpp"
#include "evanescent/model.hpp"

namespace evanescent::lindblad {

using linalg::ComplexMatrix;

using DensityMatrix = ComplexMatrix;

struct Jump {
  ComplexMatrix op;  // X = Pi_G X Pi_A
  double rate = 0.0;
};

struct LindbladModel {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::size_t dim_g = 0;
  ComplexMatrix h_s;  // Hermitian, dim x dim
  std::vector<Jump> jumps;

  std::size_t dim() const noexcept { return dim_a + dim_b + dim_g; }
  std::size_t dim_ab() const noexcept { return dim_a + dim_b; }
};

std::vector<std::string> validate(const LindbladModel& model);
void require_valid(const LindbladModel& model);

/// Violations of the density-matrix invariants: Hermitian to hermitian_tol,
/// smallest eigenvalue >= -psd_tol, trace <= 1 + trace_tol.
std::vector<std::string> density_violations(const DensityMatrix& rho, double hermitian_tol = 1e-10,
                                            double psd_tol = 1e-9, double trace_tol = 1e-10);

/// Right-hand side of the master equation, term by term as written.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);

struct IntegratorOptions {
  double max_step = 1e-3;
  /// Accept a step once it and its half agree to this trace distance at every sample.
  double agreement_tolerance = 1e-9;
  std::size_t max_refinements = 8;
};

struct LindbladTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  double step = 0.0;  // RK4 step finally accepted
};

/// Fixed-step RK4 with step halving until two successive step sizes agree.
/// Throws NumericalError if the refinement budget runs out or positivity is
/// lost beyond tolerance.
LindbladTrajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, std::span<const double> times,
                             const IntegratorOptions& options = {});

/// Non-Hermitian generator on A (+) B,
///   (Pi_A + Pi_B) H_S (Pi_A + Pi_B) - i sum_j (gamma_j / 2) X_j^dag X_j + H_I,
/// restricted to the A (+) B block.
ComplexMatrix reduced_nhh(const LindbladModel& model, const ComplexMatrix& h_i_ab);

/// rho(t) = e^{-iHt} rho(0) e^{iH^dag t}.
std::vector<DensityMatrix> nhh_density_evolve(const ComplexMatrix& h, const DensityMatrix& rho0,
                                              std::span<const double> times);

/// (1/2) sum |eig(a - b)|, for Hermitian a - b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Master-equation embedding of a block system: one G level per A level,
/// X_n = |g_n><a_n| with rate 2 Gamma_n, and H_S = diag(omega, B, g_energy).
struct Embedding {
  LindbladModel model;
  ComplexMatrix h_i_ab;  // [[0, C], [C^dag, 0]]
};

Embedding embed(const model::BlockSystem& sys, double g_energy = -1.0);

/// Embeds an A (+) B density matrix into the full space with an empty G block.
DensityMatrix embed_density(const LindbladModel& model, const DensityMatrix& rho_ab);

struct EquivalenceReport {
  std::vector<double> distances;  // per sample time
  double max_distance = 0.0;
  double rk4_step = 0.0;
};

/// Trace distance between the A (+) B projection of the master-equation
/// solution (with H_I added to H_S) and the non-Hermitian evolution under
/// `nhh`. rho0 lives on the full space and must have no G support.
EquivalenceReport equivalence_report(const LindbladModel& model, const ComplexMatrix& h_i_ab,
                                     const ComplexMatrix& nhh, const DensityMatrix& rho0,
                                     std::span<const double> times, const IntegratorOptions& options = {});

/// Maximum trace distance with nhh = reduced_nhh(model, h_i_ab).
double equivalence_check(const LindbladModel& model, const ComplexMatrix& h_i_ab, const DensityMatrix& rho0,
                         std::span<const double> times, const IntegratorOptions& options = {});

}  // namespace evanescent::lindblad
