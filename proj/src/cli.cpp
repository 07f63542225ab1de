#include "evanescent/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"

#include "evanescent/errors.hpp"
#include "evanescent/experiments.hpp"
#include "evanescent/lindblad.hpp"
#include "evanescent/scenario_io.hpp"

namespace evanescent::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string scenario_path;
  std::string preset_name;
  std::string out_path;
  std::string format = "csv";
  std::size_t threads = 1;
};

model::Scenario load(const CommonOptions& opts) {
  if (opts.scenario_path.empty() == opts.preset_name.empty())
    throw io::ParseError("exactly one of --scenario or --preset is required");
  if (!opts.preset_name.empty()) return experiments::preset(opts.preset_name);
  return io::load_scenario(opts.scenario_path);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path.string() + "' for writing");
  file << content;
  if (!file) throw Error("failed writing '" + path.string() + "'");
}

void emit(const CommonOptions& opts, const std::string& content, std::ostream& out) {
  if (opts.out_path.empty()) {
    out << content;
  } else {
    write_file(opts.out_path, content);
  }
}

std::string render(const CommonOptions& opts, const std::string& csv, const nlohmann::json& doc) {
  return opts.format == "json" ? doc.dump(2) + "\n" : csv;
}

int cmd_simulate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const model::Scenario sc = load(opts);
  const auto result = experiments::run_scenario(sc);
  emit(opts, render(opts, io::output_csv(result), io::output_json(result)), out);
  if (!opts.out_path.empty()) err << "wrote " << result.fidelities.size() << " rows to " << opts.out_path << "\n";
  return kExitOk;
}

std::string series_file_name(const std::string& axis, double value, const std::string& ext) {
  return axis + "_" + io::format_number(value) + "." + ext;
}

int cmd_sweep(const CommonOptions& opts, std::ostream& err) {
  if (opts.out_path.empty()) throw io::ParseError("sweep requires --out DIRECTORY");
  const model::Scenario sc = load(opts);
  const auto sweep = experiments::run_sweep(sc, opts.threads);

  const fs::path dir(opts.out_path);
  fs::create_directories(dir);
  const std::string ext = opts.format == "json" ? "json" : "csv";
  for (std::size_t k = 0; k < sweep.runs.size(); ++k) {
    const auto& run = sweep.runs[k];
    write_file(dir / series_file_name(sweep.axis_name, sweep.axis_values[k], ext),
               render(opts, io::output_csv(run), io::output_json(run)));
  }
  write_file(dir / ("summary." + ext), render(opts, io::summary_csv(sweep), io::summary_json(sweep)));
  err << "wrote " << sweep.runs.size() << " series and a summary to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_validate(const CommonOptions& opts, double gamma_scale, std::ostream& out) {
  const model::Scenario sc = load(opts);
  const auto embedding = lindblad::embed(sc.system);
  const auto psi0 = model::initial_state(sc);
  const auto rho0 = lindblad::embed_density(embedding.model, linalg::outer(psi0, psi0));
  const std::vector<double> times = model::time_grid(sc);

  linalg::ComplexMatrix nhh = lindblad::reduced_nhh(embedding.model, embedding.h_i_ab);
  if (gamma_scale != 1.0) {
    model::BlockSystem perturbed = sc.system;
    for (auto& g : perturbed.gammas_a) g *= gamma_scale;
    nhh = model::full_hamiltonian(perturbed);
  }
  const auto report = lindblad::equivalence_report(embedding.model, embedding.h_i_ab, nhh, rho0, times);
  const bool ok = report.max_distance <= kEquivalenceTolerance;
  out << "max_trace_distance " << io::format_number(report.max_distance) << "\n"
      << "rk4_step " << io::format_number(report.rk4_step) << "\n"
      << "tolerance " << io::format_number(kEquivalenceTolerance) << "\n"
      << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_bound(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const model::Scenario sc = load(opts);
  const auto result = experiments::run_scenario(sc);
  emit(opts, render(opts, io::bound_csv(result), io::bound_json(result)), out);
  std::size_t violations = 0;
  for (std::size_t k = 0; k < result.exact.size(); ++k)
    if (result.exact.norms_a[k] > result.psi_a_bound[k] + 1e-12) ++violations;
  if (violations > 0) {
    err << "bound violated at " << violations << " grid times\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_presets(std::ostream& out) {
  for (const auto& name : experiments::preset_names()) {
    const auto sc = experiments::preset(name);
    out << name << "  dim_A=" << sc.system.dim_a << " g=" << io::format_number(sc.system.b_block(0, 1).real())
        << " p_A=" << io::format_number(sc.p_a) << " theta=" << io::format_number(sc.theta) << " Gamma3 sweep:";
    for (double v : sc.sweep->values) out << " " << io::format_number(v);
    out << "\n";
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_out = true) {
  cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file");
  cmd->add_option("--preset", opts.preset_name, "Built-in scenario name (see `presets`)");
  if (with_out) cmd->add_option("--out", opts.out_path, "Output path (directory for sweep)");
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", opts.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evanescent-wave effective Hamiltonians for decaying few-level systems", "evanescent"};
  app.require_subcommand(1);

  CommonOptions opts;
  double gamma_scale = 1.0;

  auto* simulate = app.add_subcommand("simulate", "Exact vs EWA dynamics and fidelities on the scenario grid");
  add_common(simulate, opts);
  auto* sweep = app.add_subcommand("sweep", "Gamma_3 sweep: one table per value plus summary");
  add_common(sweep, opts);
  auto* validate = app.add_subcommand("validate", "Master-equation equivalence check of the non-Hermitian model");
  add_common(validate, opts, false);
  validate->add_option("--reduction-gamma-scale", gamma_scale,
                       "Scale the decay rates of the reduced generator (sensitivity check)");
  auto* bound = app.add_subcommand("bound", "Exact |psi_A(t)| against its analytic bound");
  add_common(bound, opts);
  auto* presets = app.add_subcommand("presets", "List built-in scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opts, out, err);
    if (sweep->parsed()) return cmd_sweep(opts, err);
    if (validate->parsed()) return cmd_validate(opts, gamma_scale, out);
    if (bound->parsed()) return cmd_bound(opts, out, err);
    if (presets->parsed()) return cmd_presets(out);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const ValidationError& e) {
    err << "validation error:\n";
    for (const auto& v : e.violations()) err << "  - " << v << "\n";
    return kExitValidationError;
  } catch (const DimensionError& e) {
    err << "validation error:\n  - " << e.what() << "\n";
    return kExitValidationError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumericalError;
  }
  return kExitParseError;
}

}  // namespace evanescent::cli
