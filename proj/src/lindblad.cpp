#include "evanescent/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evanescent/dynamics.hpp"
#include "evanescent/errors.hpp"

namespace evanescent::lindblad {

using linalg::Complex;

namespace {

constexpr Complex kI{0.0, 1.0};

bool in_range(std::size_t i, std::size_t begin, std::size_t end) { return i >= begin && i < end; }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Same right-hand side rewritten as -i(K rho - rho K^dag) + sum gamma X rho X^dag,
// K = H - i sum (gamma/2) X^dag X. Built once per integration.
class Generator {
 public:
  explicit Generator(const LindbladModel& model) : k_(model.h_s) {
    for (const auto& jump : model.jumps) {
      if (jump.rate == 0.0) continue;
      k_ -= (kI * (0.5 * jump.rate)) * (jump.op.adjoint() * jump.op);
      ops_.push_back(jump.op);
      ops_dag_.push_back(jump.op.adjoint());
      rates_.push_back(jump.rate);
    }
    k_dag_ = k_.adjoint();
  }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    ComplexMatrix out = (-kI) * (k_ * rho - rho * k_dag_);
    for (std::size_t j = 0; j < ops_.size(); ++j) out += rates_[j] * (ops_[j] * rho * ops_dag_[j]);
    return out;
  }

 private:
  ComplexMatrix k_;
  ComplexMatrix k_dag_;
  std::vector<ComplexMatrix> ops_;
  std::vector<ComplexMatrix> ops_dag_;
  std::vector<double> rates_;
};

std::vector<DensityMatrix> rk4_samples(const Generator& f, const DensityMatrix& rho0, std::span<const double> times,
                                       double max_step) {
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  DensityMatrix rho = rho0;
  out.push_back(rho);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double interval = times[k] - times[k - 1];
    const auto substeps = static_cast<std::size_t>(std::ceil(interval / max_step - 1e-9));
    const double h = interval / static_cast<double>(std::max<std::size_t>(substeps, 1));
    for (std::size_t s = 0; s < std::max<std::size_t>(substeps, 1); ++s) {
      const ComplexMatrix k1 = f(rho);
      const ComplexMatrix k2 = f(rho + (0.5 * h) * k1);
      const ComplexMatrix k3 = f(rho + (0.5 * h) * k2);
      const ComplexMatrix k4 = f(rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!rho.all_finite()) throw NumericalError("lindblad integrate: state became non-finite");
    out.push_back(rho);
  }
  return out;
}

}  // namespace

std::vector<std::string> validate(const LindbladModel& model) {
  std::vector<std::string> out;
  const std::size_t n = model.dim();
  if (model.dim_a == 0 || model.dim_b == 0) out.push_back("dim_A and dim_B must be >= 1");
  if (model.h_s.rows() != n || model.h_s.cols() != n) {
    std::ostringstream msg;
    msg << "H_S is " << model.h_s.rows() << "x" << model.h_s.cols() << ", expected " << n << "x" << n;
    out.push_back(msg.str());
    return out;
  }
  if (!model.h_s.all_finite()) out.push_back("H_S has non-finite entries");
  if (linalg::max_abs_diff(model.h_s, model.h_s.adjoint()) > model::kHermiticityTolerance)
    out.push_back("H_S is not Hermitian");
  const std::size_t ab = model.dim_ab();
  bool g_coupled = false;
  for (std::size_t i = 0; i < ab; ++i)
    for (std::size_t g = ab; g < n; ++g)
      g_coupled = g_coupled || std::abs(model.h_s(i, g)) > model::kHermiticityTolerance ||
                  std::abs(model.h_s(g, i)) > model::kHermiticityTolerance;
  if (g_coupled) out.push_back("H_S couples G coherently to A (+) B");

  for (std::size_t j = 0; j < model.jumps.size(); ++j) {
    const auto& jump = model.jumps[j];
    const std::string tag = "jump " + std::to_string(j);
    if (!(jump.rate >= 0.0) || !std::isfinite(jump.rate)) out.push_back(tag + " has a negative or non-finite rate");
    if (jump.op.rows() != n || jump.op.cols() != n) {
      out.push_back(tag + " operator has the wrong shape");
      continue;
    }
    bool structured = true;
    for (std::size_t r = 0; r < n && structured; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (jump.op(r, c) != Complex{} && !(in_range(r, ab, n) && in_range(c, 0, model.dim_a))) {
          structured = false;
          break;
        }
    if (!structured) out.push_back(tag + " operator is not of the form Pi_G X Pi_A");
    if (!jump.op.all_finite()) out.push_back(tag + " operator has non-finite entries");
  }
  return out;
}

void require_valid(const LindbladModel& model) {
  auto violations = validate(model);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

std::vector<std::string> density_violations(const DensityMatrix& rho, double hermitian_tol, double psd_tol,
                                            double trace_tol) {
  std::vector<std::string> out;
  if (rho.empty() || !rho.is_square()) {
    out.push_back("density matrix must be square");
    return out;
  }
  if (!rho.all_finite()) {
    out.push_back("density matrix has non-finite entries");
    return out;
  }
  const double asym = linalg::max_abs_diff(rho, rho.adjoint());
  if (asym > hermitian_tol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian (deviation " << asym << ")";
    out.push_back(msg.str());
  }
  double min_eig = 0.0;
  for (const auto& lambda : linalg::eigenvalues(hermitian_part(rho))) min_eig = std::min(min_eig, lambda.real());
  if (min_eig < -psd_tol) {
    std::ostringstream msg;
    msg << "density matrix is not positive semidefinite (eigenvalue " << min_eig << ")";
    out.push_back(msg.str());
  }
  if (rho.trace().real() > 1.0 + trace_tol) {
    std::ostringstream msg;
    msg << "density matrix trace " << rho.trace().real() << " exceeds 1";
    out.push_back(msg.str());
  }
  return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) {
  require_valid(model);
  if (rho.rows() != model.dim() || rho.cols() != model.dim())
    throw DimensionError("lindblad_rhs: density matrix dimension does not match model");
  ComplexMatrix out = (-kI) * (model.h_s * rho - rho * model.h_s);
  for (const auto& jump : model.jumps) {
    const ComplexMatrix x_dag = jump.op.adjoint();
    const ComplexMatrix x_dag_x = x_dag * jump.op;
    out += jump.rate * (jump.op * rho * x_dag - 0.5 * (x_dag_x * rho + rho * x_dag_x));
  }
  return out;
}

LindbladTrajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, std::span<const double> times,
                             const IntegratorOptions& options) {
  require_valid(model);
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim())
    throw DimensionError("lindblad integrate: initial state dimension does not match model");
  if (auto violations = density_violations(rho0); !violations.empty()) throw ValidationError(std::move(violations));
  dynamics::require_valid_times(times);
  if (!(options.max_step > 0.0)) throw ValidationError("lindblad integrate: max_step must be positive");

  const Generator f(model);
  double step = options.max_step;
  std::vector<DensityMatrix> coarse = rk4_samples(f, rho0, times, step);
  double disagreement = 0.0;
  for (std::size_t r = 0; r <= options.max_refinements; ++r) {
    std::vector<DensityMatrix> fine = rk4_samples(f, rho0, times, 0.5 * step);
    disagreement = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      disagreement = std::max(disagreement, trace_distance(coarse[k], fine[k]));
    step *= 0.5;
    if (disagreement <= options.agreement_tolerance) {
      for (std::size_t k = 0; k < fine.size(); ++k) {
        auto violations = density_violations(fine[k], 1e-10, 1e-9, 1e-10);
        if (!violations.empty()) {
          std::ostringstream msg;
          msg << "lindblad integrate: step " << step << " lost a density-matrix invariant at t = " << times[k]
              << ": " << violations.front();
          throw NumericalError(msg.str());
        }
      }
      return {std::vector<double>(times.begin(), times.end()), std::move(fine), step};
    }
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg << "lindblad integrate: step halving did not converge (step " << step << ", disagreement " << disagreement
      << ")";
  throw NumericalError(msg.str());
}

ComplexMatrix reduced_nhh(const LindbladModel& model, const ComplexMatrix& h_i_ab) {
  require_valid(model);
  const std::size_t ab = model.dim_ab();
  if (h_i_ab.rows() != ab || h_i_ab.cols() != ab)
    throw DimensionError("reduced_nhh: interaction must act on A (+) B");
  ComplexMatrix h0 = model.h_s.block(0, 0, ab, ab);
  for (const auto& jump : model.jumps) {
    const ComplexMatrix x_dag_x = jump.op.adjoint() * jump.op;
    h0 -= (kI * (0.5 * jump.rate)) * x_dag_x.block(0, 0, ab, ab);
  }
  return h0 + h_i_ab;
}

std::vector<DensityMatrix> nhh_density_evolve(const ComplexMatrix& h, const DensityMatrix& rho0,
                                              std::span<const double> times) {
  if (h.empty() || !h.is_square()) throw DimensionError("nhh_density_evolve: generator must be square");
  if (rho0.rows() != h.rows() || rho0.cols() != h.cols())
    throw DimensionError("nhh_density_evolve: density matrix dimension does not match generator");
  dynamics::require_valid_times(times);

  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  DensityMatrix rho = rho0;
  out.push_back(rho);
  double cached_step = -1.0;
  ComplexMatrix u;
  ComplexMatrix u_dag;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - cached_step) > 1e-14 * step) {
      u = linalg::expm((-kI * step) * h);
      u_dag = u.adjoint();
      cached_step = step;
    }
    rho = u * rho * u_dag;
    out.push_back(rho);
  }
  return out;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  double sum = 0.0;
  for (const auto& lambda : linalg::eigenvalues(hermitian_part(a - b))) sum += std::abs(lambda.real());
  return 0.5 * sum;
}

Embedding embed(const model::BlockSystem& sys, double g_energy) {
  model::require_valid(sys);
  LindbladModel m;
  m.dim_a = sys.dim_a;
  m.dim_b = sys.dim_b;
  m.dim_g = sys.dim_a;
  const std::size_t n = m.dim();
  m.h_s = ComplexMatrix(n, n);
  for (std::size_t a = 0; a < sys.dim_a; ++a) m.h_s(a, a) = sys.omegas_a[a];
  m.h_s.set_block(sys.dim_a, sys.dim_a, sys.b_block);
  for (std::size_t g = m.dim_ab(); g < n; ++g) m.h_s(g, g) = g_energy;
  for (std::size_t a = 0; a < sys.dim_a; ++a) {
    ComplexMatrix x(n, n);
    x(m.dim_ab() + a, a) = 1.0;
    m.jumps.push_back({std::move(x), 2.0 * sys.gammas_a[a]});
  }
  return {std::move(m), model::interaction_hamiltonian(sys)};
}

DensityMatrix embed_density(const LindbladModel& model, const DensityMatrix& rho_ab) {
  if (rho_ab.rows() != model.dim_ab() || rho_ab.cols() != model.dim_ab())
    throw DimensionError("embed_density: matrix must act on A (+) B");
  DensityMatrix rho(model.dim(), model.dim());
  rho.set_block(0, 0, rho_ab);
  return rho;
}

EquivalenceReport equivalence_report(const LindbladModel& model, const ComplexMatrix& h_i_ab,
                                     const ComplexMatrix& nhh, const DensityMatrix& rho0,
                                     std::span<const double> times, const IntegratorOptions& options) {
  require_valid(model);
  const std::size_t ab = model.dim_ab();
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim())
    throw DimensionError("equivalence_check: initial state must act on A (+) B (+) G");
  if (h_i_ab.rows() != ab || h_i_ab.cols() != ab) throw DimensionError("equivalence_check: H_I must act on A (+) B");
  for (std::size_t i = 0; i < model.dim(); ++i)
    for (std::size_t j = 0; j < model.dim(); ++j)
      if ((i >= ab || j >= ab) && std::abs(rho0(i, j)) > 1e-12)
        throw ValidationError("equivalence_check: initial state has support on G");

  LindbladModel driven = model;
  ComplexMatrix h_i_full(model.dim(), model.dim());
  h_i_full.set_block(0, 0, h_i_ab);
  driven.h_s += h_i_full;

  const LindbladTrajectory master = integrate(driven, rho0, times, options);
  const std::vector<DensityMatrix> reduced = nhh_density_evolve(nhh, rho0.block(0, 0, ab, ab), times);

  EquivalenceReport report;
  report.rk4_step = master.step;
  report.distances.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double d = trace_distance(master.states[k].block(0, 0, ab, ab), reduced[k]);
    report.distances.push_back(d);
    report.max_distance = std::max(report.max_distance, d);
  }
  return report;
}

double equivalence_check(const LindbladModel& model, const ComplexMatrix& h_i_ab, const DensityMatrix& rho0,
                         std::span<const double> times, const IntegratorOptions& options) {
  return equivalence_report(model, h_i_ab, reduced_nhh(model, h_i_ab), rho0, times, options).max_distance;
}

}  // namespace evanescent::lindblad
