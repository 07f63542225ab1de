#include "evanescent/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "evanescent/errors.hpp"
#include "evanescent/ewa.hpp"

namespace evanescent::experiments {

using linalg::Complex;
using linalg::ComplexMatrix;

ScenarioResult run_scenario(const Scenario& sc) {
  model::require_valid(sc);
  const auto& sys = sc.system;
  const std::vector<double> times = model::time_grid(sc);
  const linalg::ComplexVector psi0 = model::initial_state(sc);
  const linalg::ComplexVector psi_b0 = model::b_part(sys, psi0);

  ScenarioResult out;
  out.label = sc.label;
  out.exact = dynamics::evolve_exact(sys, psi0, times);
  out.ewa = dynamics::evolve_ewa(sys, psi_b0, times);
  out.uncoupled = dynamics::evolve_uncoupled(sys, psi_b0, times);
  out.fidelities = metrics::fidelity_series(sys, out.exact, out.ewa, out.uncoupled);
  out.psi_a_bound.reserve(times.size());
  for (double t : times) out.psi_a_bound.push_back(dynamics::psi_a_bound(sys, psi0, t));

  out.d_b = ewa::db_ewa(sys);
  out.max_db_entry = out.d_b.max_abs();
  try {
    const ewa::EwaConfig cfg = ewa::default_config(sys, sc.delta_t_factor, sc.quadrature_n);
    out.db_quadrature_gap = ewa::relative_max_norm_diff(ewa::db_numeric(sys, cfg), out.d_b);
  } catch (const RangeError&) {
    out.db_quadrature_gap.reset();
  } catch (const ValidationError&) {
    out.db_quadrature_gap.reset();
  }
  return out;
}

MetricSummary summarize(std::span<const double> values) {
  double min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    min = std::min(min, v);
    sum += v;
    ++count;
  }
  if (count == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return {min, sum / static_cast<double>(count)};
}

Scenario with_gamma3(const Scenario& sc, double gamma3) {
  if (!(gamma3 > 0.0) || !std::isfinite(gamma3)) throw ValidationError("Gamma_3 must be positive and finite");
  if (sc.system.gammas_a.empty()) throw ValidationError("scenario has no A levels");
  Scenario out = sc;
  auto& gammas = out.system.gammas_a;
  const double base = gammas.front();
  if (base > 0.0) {
    const double factor = gamma3 / base;
    for (auto& g : gammas) g *= factor;
  }
  gammas.front() = gamma3;
  out.sweep.reset();
  return out;
}

SweepResult gamma_sweep(const Scenario& sc, std::span<const double> gammas, std::size_t threads) {
  model::require_valid(sc);
  if (gammas.empty()) throw ValidationError("sweep values are empty");
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (!(gammas[k] > 0.0)) throw ValidationError("sweep values must be positive");
    if (k > 0 && !(gammas[k] > gammas[k - 1])) throw ValidationError("sweep values must be strictly increasing");
  }

  SweepResult out;
  out.axis_name = std::string(kGammaAxis);
  out.axis_values.assign(gammas.begin(), gammas.end());
  out.runs.resize(gammas.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < gammas.size(); k = next++) {
      try {
        out.runs[k] = run_scenario(with_gamma3(sc, gammas[k]));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(threads, 1, gammas.size());
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const auto& run = out.runs[k];
    out.summary.push_back({gammas[k], summarize(run.fidelities.f_ewa), summarize(run.fidelities.f_z),
                           summarize(run.fidelities.f_zn), run.max_db_entry});
  }
  return out;
}

SweepResult run_sweep(const Scenario& sc, std::size_t threads) {
  if (!sc.sweep) throw ValidationError("scenario has no sweep block");
  if (sc.sweep->axis != kGammaAxis)
    throw ValidationError("unsupported sweep axis '" + sc.sweep->axis + "' (supported: " + std::string(kGammaAxis) +
                          ")");
  return gamma_sweep(sc, sc.sweep->values, threads);
}

namespace {

struct PresetSpec {
  std::string_view name;
  double g;
  double p_a;
  double theta;
  bool four_level;
  bool zeno;
};

constexpr double kPi = std::numbers::pi;

constexpr PresetSpec kPresets[] = {
    {"fig2a", 0.5, 0.0, 0.0, false, false},      {"fig2b", 0.5, 0.0, kPi / 4, false, false},
    {"fig2c", 0.25, 0.0, 0.0, false, false},     {"fig2d", 0.25, 0.25, kPi / 4, false, false},
    {"fig3a", 0.5, 0.0, 0.0, true, false},       {"fig3b", 0.5, 0.1, kPi / 3, true, false},
    {"fig4", 0.5, 0.0, 0.0, true, true},
};

Scenario build(const PresetSpec& spec) {
  Scenario sc;
  sc.label = std::string(spec.name);
  auto& sys = sc.system;
  sys.dim_b = 2;
  sys.b_block = ComplexMatrix(2, 2, {0.0, spec.g, spec.g, 1.0});
  if (!spec.four_level) {
    sys.dim_a = 1;
    sys.omegas_a = {0.0};
    sys.gammas_a = {5.0};
    sys.c_block = ComplexMatrix(1, 2, {0.5, 0.5});
  } else if (!spec.zeno) {
    sys.dim_a = 2;
    sys.omegas_a = {0.0, 0.0};
    sys.gammas_a = {5.0, 6.0};  // Gamma_4 / Gamma_3 = 1.2
    sys.c_block = ComplexMatrix(2, 2, {0.5, 0.5, 0.4, 0.4});
  } else {
    sys.dim_a = 2;
    sys.omegas_a = {0.0, 0.0};
    sys.gammas_a = {100.0, 0.0};
    sys.c_block = ComplexMatrix(2, 2, {0.5, 0.5, 0.0, 0.0});
  }
  sc.p_a = spec.p_a;
  sc.theta = spec.theta;
  sc.t_max = 20.0;
  sc.n_steps = 400;
  sc.delta_t_factor = ewa::kDefaultDeltaTFactor;
  sc.quadrature_n = ewa::kDefaultQuadratureN;
  sc.sweep = model::SweepSpec{std::string(kGammaAxis),
                              spec.zeno ? std::vector<double>{2.0, 5.0, 10.0, 100.0}
                                        : std::vector<double>{0.1, 1.0, 3.0, 5.0}};
  return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& spec : kPresets) names.emplace_back(spec.name);
  return names;
}

Scenario preset(std::string_view name) {
  for (const auto& spec : kPresets)
    if (spec.name == name) return build(spec);
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ValidationError("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace evanescent::experiments
