#include "evanescent/model.hpp"

#include <cmath>
#include <sstream>

#include "evanescent/errors.hpp"

namespace evanescent::model {

namespace {

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::vector<std::string> validate(const BlockSystem& sys) {
  std::vector<std::string> out;
  auto add = [&out](const std::string& msg) { out.push_back(msg); };

  if (sys.dim_a == 0) add("dim_A must be >= 1");
  if (sys.dim_b == 0) add("dim_B must be >= 1");
  if (sys.omegas_a.size() != sys.dim_a) {
    std::ostringstream msg;
    msg << "omegas_A has " << sys.omegas_a.size() << " entries, expected dim_A = " << sys.dim_a;
    add(msg.str());
  }
  if (sys.gammas_a.size() != sys.dim_a) {
    std::ostringstream msg;
    msg << "gammas_A has " << sys.gammas_a.size() << " entries, expected dim_A = " << sys.dim_a;
    add(msg.str());
  }
  for (std::size_t n = 0; n < sys.omegas_a.size(); ++n)
    if (!std::isfinite(sys.omegas_a[n])) add("omegas_A[" + std::to_string(n) + "] is not finite");
  for (std::size_t n = 0; n < sys.gammas_a.size(); ++n) {
    if (!std::isfinite(sys.gammas_a[n])) {
      add("gammas_A[" + std::to_string(n) + "] is not finite");
    } else if (sys.gammas_a[n] < 0.0) {
      std::ostringstream msg;
      msg << "gammas_A[" << n << "] = " << sys.gammas_a[n] << " is negative";
      add(msg.str());
    }
  }

  const auto& b = sys.b_block;
  if (b.rows() != sys.dim_b || b.cols() != sys.dim_b) {
    std::ostringstream msg;
    msg << "B block is " << b.rows() << "x" << b.cols() << ", expected " << sys.dim_b << "x" << sys.dim_b;
    add(msg.str());
  } else if (!b.all_finite()) {
    add("B block has non-finite entries");
  } else {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = i; j < b.cols(); ++j)
        if (std::abs(b(i, j) - std::conj(b(j, i))) > kHermiticityTolerance) {
          std::ostringstream msg;
          msg << "B block is not Hermitian: B(" << i << "," << j << ") = " << b(i, j) << " but conj(B(" << j << ","
              << i << ")) = " << std::conj(b(j, i));
          add(msg.str());
        }
  }

  const auto& c = sys.c_block;
  if (c.rows() != sys.dim_a || c.cols() != sys.dim_b) {
    std::ostringstream msg;
    msg << "C block is " << c.rows() << "x" << c.cols() << ", expected " << sys.dim_a << "x" << sys.dim_b;
    add(msg.str());
  } else if (!c.all_finite()) {
    add("C block has non-finite entries");
  }
  return out;
}

std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> out = validate(sc.system);
  if (!(sc.t_max > 0.0) || !std::isfinite(sc.t_max)) out.push_back("t_max must be positive and finite");
  if (sc.n_steps < 2) out.push_back("n_steps must be >= 2");
  if (!(sc.delta_t_factor > 0.0) || !std::isfinite(sc.delta_t_factor))
    out.push_back("delta_t_factor must be positive and finite");
  if (sc.quadrature_n < 2 || sc.quadrature_n % 2 != 0) out.push_back("quadrature_n must be even and >= 2");

  if (sc.amplitudes) {
    if (sc.amplitudes->size() != sc.system.dim()) {
      std::ostringstream msg;
      msg << "initial amplitudes have " << sc.amplitudes->size() << " entries, expected dim_A + dim_B = "
          << sc.system.dim();
      out.push_back(msg.str());
    } else {
      double norm = 0.0;
      bool all_finite = true;
      for (const auto& z : *sc.amplitudes) {
        all_finite = all_finite && finite(z);
        norm += std::norm(z);
      }
      if (!all_finite) out.push_back("initial amplitudes are not finite");
      else if (norm == 0.0) out.push_back("initial amplitudes are all zero");
    }
  } else {
    if (!(sc.p_a >= 0.0 && sc.p_a <= 1.0)) {
      std::ostringstream msg;
      msg << "p_A = " << sc.p_a << " is outside [0, 1]";
      out.push_back(msg.str());
    }
    if (!std::isfinite(sc.theta)) out.push_back("theta is not finite");
    if (sc.system.dim_b != 2) out.push_back("the (p_A, theta) initial state requires dim_B = 2");
    if (sc.system.dim_a == 0) out.push_back("the (p_A, theta) initial state requires dim_A >= 1");
  }

  if (sc.sweep) {
    if (sc.sweep->values.empty()) out.push_back("sweep values are empty");
    for (std::size_t k = 0; k < sc.sweep->values.size(); ++k) {
      if (!(sc.sweep->values[k] > 0.0) || !std::isfinite(sc.sweep->values[k]))
        out.push_back("sweep value " + std::to_string(k) + " must be positive and finite");
      if (k > 0 && !(sc.sweep->values[k] > sc.sweep->values[k - 1]))
        out.push_back("sweep values must be strictly increasing");
    }
  }
  return out;
}

void require_valid(const BlockSystem& sys) {
  auto violations = validate(sys);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

void require_valid(const Scenario& sc) {
  auto violations = validate(sc);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

ComplexMatrix a_block(const BlockSystem& sys) {
  require_valid(sys);
  ComplexMatrix a(sys.dim_a, sys.dim_a);
  for (std::size_t n = 0; n < sys.dim_a; ++n) a(n, n) = Complex(sys.omegas_a[n], -sys.gammas_a[n]);
  return a;
}

ComplexMatrix free_hamiltonian(const BlockSystem& sys) {
  ComplexMatrix h(sys.dim(), sys.dim());
  h.set_block(0, 0, a_block(sys));
  h.set_block(sys.dim_a, sys.dim_a, sys.b_block);
  return h;
}

ComplexMatrix interaction_hamiltonian(const BlockSystem& sys) {
  require_valid(sys);
  ComplexMatrix h(sys.dim(), sys.dim());
  h.set_block(0, sys.dim_a, sys.c_block);
  h.set_block(sys.dim_a, 0, sys.c_block.adjoint());
  return h;
}

ComplexMatrix full_hamiltonian(const BlockSystem& sys) { return free_hamiltonian(sys) + interaction_hamiltonian(sys); }

ComplexMatrix projector_a(const BlockSystem& sys) {
  ComplexMatrix p(sys.dim(), sys.dim());
  for (std::size_t i = 0; i < sys.dim_a; ++i) p(i, i) = 1.0;
  return p;
}

ComplexMatrix projector_b(const BlockSystem& sys) {
  ComplexMatrix p(sys.dim(), sys.dim());
  for (std::size_t i = sys.dim_a; i < sys.dim(); ++i) p(i, i) = 1.0;
  return p;
}

ComplexVector initial_state(const Scenario& sc) {
  require_valid(sc);
  const auto& sys = sc.system;
  ComplexVector psi(sys.dim());
  if (sc.amplitudes) {
    psi = ComplexVector(*sc.amplitudes);
  } else {
    const double b_weight = std::sqrt(1.0 - sc.p_a);
    psi(0) = sc.p_a;
    psi(sys.dim_a) = b_weight * std::sin(sc.theta);      // |1>
    psi(sys.dim_a + 1) = b_weight * std::cos(sc.theta);  // |2>
  }
  psi *= 1.0 / psi.norm();
  return psi;
}

std::vector<double> time_grid(const Scenario& sc) {
  std::vector<double> times(sc.n_steps + 1);
  for (std::size_t k = 0; k <= sc.n_steps; ++k)
    times[k] = sc.t_max * static_cast<double>(k) / static_cast<double>(sc.n_steps);
  return times;
}

ComplexVector a_part(const BlockSystem& sys, const ComplexVector& psi) {
  if (psi.dim() != sys.dim()) throw DimensionError("a_part: state dimension does not match system");
  return psi.segment(0, sys.dim_a);
}

ComplexVector b_part(const BlockSystem& sys, const ComplexVector& psi) {
  if (psi.dim() != sys.dim()) throw DimensionError("b_part: state dimension does not match system");
  return psi.segment(sys.dim_a, sys.dim_b);
}

ComplexVector embed_b(const BlockSystem& sys, const ComplexVector& psi_b) {
  if (psi_b.dim() != sys.dim_b) throw DimensionError("embed_b: vector dimension does not match dim_B");
  ComplexVector out(sys.dim());
  for (std::size_t i = 0; i < sys.dim_b; ++i) out(sys.dim_a + i) = psi_b(i);
  return out;
}

}  // namespace evanescent::model
