#include "evanescent/ewa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "evanescent/errors.hpp"

namespace evanescent::ewa {

using linalg::Complex;

namespace {

constexpr Complex kI{0.0, 1.0};

bool row_coupled(const BlockSystem& sys, std::size_t n) {
  for (std::size_t m = 0; m < sys.dim_b; ++m)
    if (sys.c_block(n, m) != Complex{}) return true;
  return false;
}

ComplexMatrix frame_generator(const BlockSystem& sys, InteractionFrame frame) {
  if (frame == InteractionFrame::block) return sys.b_block;
  ComplexMatrix diag(sys.dim_b, sys.dim_b);
  for (std::size_t m = 0; m < sys.dim_b; ++m) diag(m, m) = sys.b_block(m, m).real();
  return diag;
}

// e^{sign i A tau}, A diagonal.
ComplexMatrix a_propagator(const BlockSystem& sys, double sign, double tau) {
  ComplexMatrix out(sys.dim_a, sys.dim_a);
  for (std::size_t n = 0; n < sys.dim_a; ++n) {
    const Complex a_n(sys.omegas_a[n], -sys.gammas_a[n]);
    out(n, n) = std::exp(sign * kI * a_n * tau);
  }
  return out;
}

ComplexMatrix b_propagator(const ComplexMatrix& generator, double sign, double tau) {
  return linalg::expm((sign * kI * tau) * generator);
}

void check_window(const BlockSystem& sys, const EwaConfig& cfg) {
  require_valid(cfg);
  const double gmax = *std::max_element(sys.gammas_a.begin(), sys.gammas_a.end());
  if (gmax * cfg.delta_t > kMaxGammaWindow) {
    std::ostringstream msg;
    msg << "EWA window too long: max Gamma_n * dt = " << gmax * cfg.delta_t << " exceeds " << kMaxGammaWindow
        << "; reduce dt (delta_t_factor)";
    throw RangeError(msg.str());
  }
}

}  // namespace

double min_coupled_gamma(const BlockSystem& sys) {
  model::require_valid(sys);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < sys.dim_a; ++n)
    if (row_coupled(sys, n)) best = std::min(best, sys.gammas_a[n]);
  return std::isinf(best) ? 0.0 : best;
}

EwaConfig default_config(const BlockSystem& sys, double delta_t_factor, std::size_t quadrature_n) {
  if (!(delta_t_factor > 0.0)) throw ValidationError("delta_t_factor must be positive");
  bool any_coupled = false;
  for (std::size_t n = 0; n < sys.dim_a; ++n) any_coupled = any_coupled || row_coupled(sys, n);
  const double gamma = min_coupled_gamma(sys);
  if (any_coupled && gamma == 0.0)
    throw ValidationError("no evanescent window: a level coupled to B has Gamma_n = 0");
  EwaConfig cfg{any_coupled ? delta_t_factor / gamma : delta_t_factor, quadrature_n};
  require_valid(cfg);
  return cfg;
}

void require_valid(const EwaConfig& cfg) {
  std::vector<std::string> violations;
  if (!(cfg.delta_t > 0.0) || !std::isfinite(cfg.delta_t)) violations.push_back("delta_t must be positive and finite");
  if (cfg.quadrature_n < 2 || cfg.quadrature_n % 2 != 0) violations.push_back("quadrature_n must be even and >= 2");
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

ComplexMatrix db_ewa(const BlockSystem& sys) {
  model::require_valid(sys);
  ComplexMatrix d(sys.dim_b, sys.dim_b);
  for (std::size_t n = 0; n < sys.dim_a; ++n) {
    for (std::size_t mp = 0; mp < sys.dim_b; ++mp) {
      const double omega_mp = sys.b_block(mp, mp).real();
      const Complex denom(sys.gammas_a[n], sys.omegas_a[n] - omega_mp);
      for (std::size_t m = 0; m < sys.dim_b; ++m) {
        const Complex numer = std::conj(sys.c_block(n, m)) * sys.c_block(n, mp);
        if (numer == Complex{}) continue;
        if (std::abs(denom) < kSingularDenominator) {
          std::ostringstream msg;
          msg << "singular EWA configuration: Gamma_" << n << " = 0 and omega_" << n << " equals B energy " << mp
              << " with a nonzero coupling";
          throw SingularConfigurationError(msg.str());
        }
        d(m, mp) += numer / denom;
      }
    }
  }
  return d;
}

EffectiveHamiltonianB hb_ewa(const BlockSystem& sys) {
  EffectiveHamiltonianB out;
  out.d_b = db_ewa(sys);
  out.matrix = sys.b_block - kI * out.d_b;
  return out;
}

ComplexMatrix db_numeric(const BlockSystem& sys, const EwaConfig& cfg, InteractionFrame frame) {
  model::require_valid(sys);
  check_window(sys, cfg);
  const double dt = cfg.delta_t;
  const ComplexMatrix gen = frame_generator(sys, frame);
  const ComplexMatrix& c = sys.c_block;

  // A-B block of C_up(eta): e^{iA eta} C e^{-iB eta}
  auto c_up = [&](double eta) { return a_propagator(sys, +1.0, eta) * c * b_propagator(gen, -1.0, eta); };
  const ComplexMatrix integral = linalg::integrate_matrix(c_up, 0.0, dt, cfg.quadrature_n);
  // B-A block of C_down(t + dt): e^{iB dt} C^dag e^{-iA dt}
  const ComplexMatrix c_down_end = b_propagator(gen, +1.0, dt) * c.adjoint() * a_propagator(sys, -1.0, dt);

  ComplexMatrix d = b_propagator(gen, -1.0, dt) * c_down_end * integral * b_propagator(gen, +1.0, dt);
  if (!d.all_finite()) throw RangeError("D_B quadrature overflowed; reduce dt");
  return d;
}

ComplexMatrix da_numeric(const BlockSystem& sys, const EwaConfig& cfg, InteractionFrame frame) {
  model::require_valid(sys);
  check_window(sys, cfg);
  const double dt = cfg.delta_t;
  const ComplexMatrix gen = frame_generator(sys, frame);
  const ComplexMatrix c_dag = sys.c_block.adjoint();

  // B-A block of C_down(eta): e^{iB eta} C^dag e^{-iA eta}
  auto c_down = [&](double eta) { return b_propagator(gen, +1.0, eta) * c_dag * a_propagator(sys, -1.0, eta); };
  const ComplexMatrix integral = linalg::integrate_matrix(c_down, 0.0, dt, cfg.quadrature_n);
  // A-B block of C_up(t + dt): e^{iA dt} C e^{-iB dt}
  const ComplexMatrix c_up_end = a_propagator(sys, +1.0, dt) * sys.c_block * b_propagator(gen, -1.0, dt);

  ComplexMatrix d = a_propagator(sys, -1.0, dt) * c_up_end * integral * a_propagator(sys, +1.0, dt);
  if (!d.all_finite()) throw RangeError("D_A quadrature overflowed; reduce dt");
  return d;
}

DressingBlocks d_blocks_numeric(const BlockSystem& sys, const EwaConfig& cfg, InteractionFrame frame) {
  return {da_numeric(sys, cfg, frame), db_numeric(sys, cfg, frame)};
}

ComplexMatrix heff_full(const BlockSystem& sys, const EwaConfig& cfg, InteractionFrame frame) {
  const DressingBlocks d = d_blocks_numeric(sys, cfg, frame);
  ComplexMatrix h(sys.dim(), sys.dim());
  h.set_block(0, 0, model::a_block(sys) - kI * d.d_a);
  h.set_block(0, sys.dim_a, sys.c_block);
  h.set_block(sys.dim_a, sys.dim_a, sys.b_block - kI * d.d_b);
  return h;
}

double relative_max_norm_diff(const ComplexMatrix& value, const ComplexMatrix& reference) {
  const double diff = linalg::max_abs_diff(value, reference);
  const double scale = reference.max_abs();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace evanescent::ewa
