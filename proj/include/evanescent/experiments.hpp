#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evanescent/dynamics.hpp"
#include "evanescent/metrics.hpp"
#include "evanescent/model.hpp"

namespace evanescent::experiments {

using model::Scenario;

/// Sweep axis: Gamma_3 / epsilon, with the other decay rates tied to it by
/// their ratio in the base scenario.
inline constexpr std::string_view kGammaAxis = "Gamma3_over_eps";

struct ScenarioResult {
  std::string label;
  dynamics::Trajectory exact;      // full space
  dynamics::Trajectory ewa;        // B subspace, H_B^EWA
  dynamics::Trajectory uncoupled;  // B subspace, bare B
  metrics::FidelitySeries fidelities;
  std::vector<double> psi_a_bound;
  linalg::ComplexMatrix d_b;  // closed-form dressing
  double max_db_entry = 0.0;
  /// Relative max-norm gap between the quadrature D_B and the closed form;
  /// empty when the quadrature window is out of range for this system.
  std::optional<double> db_quadrature_gap;
};

struct MetricSummary {
  double min = 0.0;
  double mean = 0.0;
};

struct SweepSummaryRow {
  double axis_value = 0.0;
  MetricSummary f_ewa;
  MetricSummary f_z;
  MetricSummary f_zn;
  double max_db_entry = 0.0;
};

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<ScenarioResult> runs;  // one per axis value, same order
  std::vector<SweepSummaryRow> summary;
};

ScenarioResult run_scenario(const Scenario& sc);

/// Min and mean over the defined (non-NaN) entries; NaN if there are none.
MetricSummary summarize(std::span<const double> values);

/// Copy of `sc` with Gamma_3 (the first A level) set to gamma3 and every other
/// Gamma_n scaled by the same factor.
Scenario with_gamma3(const Scenario& sc, double gamma3);

/// Runs `with_gamma3(sc, g)` for each g. Runs are independent and execute on
/// up to `threads` workers; results are ordered by the input grid.
SweepResult gamma_sweep(const Scenario& sc, std::span<const double> gammas, std::size_t threads = 1);

/// gamma_sweep over the scenario's own sweep block.
SweepResult run_sweep(const Scenario& sc, std::size_t threads = 1);

std::vector<std::string> preset_names();

/// Built-in scenarios for the three-level (fig2a-d), four-level (fig3a-b)
/// and Zeno (fig4) studies. ValidationError lists the valid names otherwise.
Scenario preset(std::string_view name);

}  // namespace evanescent::experiments
