#include "evanescent/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace evanescent::io {

using json = nlohmann::json;
using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

// Strict view of one JSON object: every key must be consumed exactly once.
class ObjectReader {
 public:
  ObjectReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ParseError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  const json& require(const std::string& key) {
    if (!doc_.contains(key)) throw ParseError(where() + ": missing key '" + key + "'");
    seen_.insert(key);
    return doc_.at(key);
  }

  const json* optional(const std::string& key) {
    if (!doc_.contains(key)) return nullptr;
    seen_.insert(key);
    return &doc_.at(key);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : doc_.items())
      if (!seen_.contains(key)) throw ParseError(where() + ": unknown key '" + key + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "scenario" : path_; }

  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

double as_number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ParseError(field + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ParseError(field + ": expected a finite number");
  return v;
}

std::size_t as_count(const json& value, const std::string& field) {
  if (!value.is_number_integer() || value.get<long long>() < 0)
    throw ParseError(field + ": expected a non-negative integer");
  return value.get<std::size_t>();
}

std::vector<double> as_numbers(const json& value, const std::string& field) {
  if (!value.is_array()) throw ParseError(field + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < value.size(); ++k)
    out.push_back(as_number(value[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

Complex as_complex(const json& value, const std::string& field) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
    throw ParseError(field + ": expected a complex number as a two-element [re, im] array");
  return {as_number(value[0], field), as_number(value[1], field)};
}

std::vector<Complex> as_complex_list(const json& value, const std::string& field) {
  if (!value.is_array()) throw ParseError(field + ": expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t k = 0; k < value.size(); ++k)
    out.push_back(as_complex(value[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

ComplexMatrix as_matrix(const json& value, const std::string& field, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ValidationError("dim_A and dim_B must be >= 1");
  std::vector<Complex> entries = as_complex_list(value, field);
  if (entries.size() != rows * cols) {
    std::ostringstream msg;
    msg << field << ": expected " << rows * cols << " row-major entries for a " << rows << "x" << cols
        << " block, got " << entries.size();
    throw ParseError(msg.str());
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (const auto& z : m.entries()) out.push_back(complex_to_json(z));
  return out;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream msg;
  msg << "line " << line << ", column " << column;
  return msg.str();
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

model::Scenario scenario_from_json(const json& doc) {
  model::Scenario sc;
  ObjectReader top(doc, "");
  if (const json* label = top.optional("label")) {
    if (!label->is_string()) throw ParseError("label: expected a string");
    sc.label = label->get<std::string>();
  }

  {
    ObjectReader sys(top.require("system"), "system");
    auto& s = sc.system;
    s.dim_a = as_count(sys.require("dim_A"), sys.field("dim_A"));
    s.dim_b = as_count(sys.require("dim_B"), sys.field("dim_B"));
    s.omegas_a = as_numbers(sys.require("omegas_A"), sys.field("omegas_A"));
    s.gammas_a = as_numbers(sys.require("gammas_A"), sys.field("gammas_A"));
    s.b_block = as_matrix(sys.require("B"), sys.field("B"), s.dim_b, s.dim_b);
    s.c_block = as_matrix(sys.require("C"), sys.field("C"), s.dim_a, s.dim_b);
    sys.finish();
  }

  {
    ObjectReader init(top.require("initial"), "initial");
    if (init.has("amplitudes")) {
      if (init.has("p_A") || init.has("theta"))
        throw ParseError("initial: give either {p_A, theta} or {amplitudes}, not both");
      sc.amplitudes = as_complex_list(init.require("amplitudes"), init.field("amplitudes"));
    } else {
      sc.p_a = as_number(init.require("p_A"), init.field("p_A"));
      sc.theta = as_number(init.require("theta"), init.field("theta"));
    }
    init.finish();
  }

  {
    ObjectReader grid(top.require("grid"), "grid");
    sc.t_max = as_number(grid.require("t_max"), grid.field("t_max"));
    sc.n_steps = as_count(grid.require("n_steps"), grid.field("n_steps"));
    grid.finish();
  }

  if (const json* ewa_doc = top.optional("ewa")) {
    ObjectReader ewa(*ewa_doc, "ewa");
    if (const json* f = ewa.optional("delta_t_factor")) sc.delta_t_factor = as_number(*f, ewa.field("delta_t_factor"));
    if (const json* n = ewa.optional("quadrature_n")) sc.quadrature_n = as_count(*n, ewa.field("quadrature_n"));
    ewa.finish();
  }

  if (const json* sweep_doc = top.optional("sweep")) {
    ObjectReader sweep(*sweep_doc, "sweep");
    model::SweepSpec spec;
    const json& axis = sweep.require("axis");
    if (!axis.is_string()) throw ParseError("sweep.axis: expected a string");
    spec.axis = axis.get<std::string>();
    spec.values = as_numbers(sweep.require("values"), sweep.field("values"));
    sweep.finish();
    sc.sweep = std::move(spec);
  }
  top.finish();
  return sc;
}

json scenario_to_json(const model::Scenario& sc) {
  json doc;
  doc["label"] = sc.label;
  const auto& s = sc.system;
  doc["system"] = {{"dim_A", s.dim_a},
                   {"dim_B", s.dim_b},
                   {"omegas_A", s.omegas_a},
                   {"gammas_A", s.gammas_a},
                   {"B", matrix_to_json(s.b_block)},
                   {"C", matrix_to_json(s.c_block)}};
  if (sc.amplitudes) {
    json amps = json::array();
    for (const auto& z : *sc.amplitudes) amps.push_back(complex_to_json(z));
    doc["initial"] = {{"amplitudes", amps}};
  } else {
    doc["initial"] = {{"p_A", sc.p_a}, {"theta", sc.theta}};
  }
  doc["grid"] = {{"t_max", sc.t_max}, {"n_steps", sc.n_steps}};
  doc["ewa"] = {{"delta_t_factor", sc.delta_t_factor}, {"quadrature_n", sc.quadrature_n}};
  if (sc.sweep) doc["sweep"] = {{"axis", sc.sweep->axis}, {"values", sc.sweep->values}};
  return doc;
}

model::Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON at " + line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  model::Scenario sc = scenario_from_json(doc);
  model::require_valid(sc);
  return sc;
}

model::Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16g", value);
  return buf;
}

std::string output_csv(const experiments::ScenarioResult& r) {
  std::string out(kOutputHeader);
  out += '\n';
  const auto& f = r.fidelities;
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (double v : {f.times[k], f.f_ewa[k], f.f_z[k], f.f_zn[k], r.exact.norms_full[k], r.exact.norms_a[k],
                     r.exact.norms_b[k], r.psi_a_bound[k]}) {
      out += format_number(v);
      out += ',';
    }
    out += std::to_string(f.flags[k]);
    out += '\n';
  }
  return out;
}

json output_json(const experiments::ScenarioResult& r) {
  const auto& f = r.fidelities;
  json rows = json::array();
  for (std::size_t k = 0; k < f.size(); ++k)
    rows.push_back({f.times[k], number_or_null(f.f_ewa[k]), f.f_z[k], number_or_null(f.f_zn[k]),
                    r.exact.norms_full[k], r.exact.norms_a[k], r.exact.norms_b[k], r.psi_a_bound[k], f.flags[k]});
  json doc;
  doc["label"] = r.label;
  doc["columns"] = {"t", "f_ewa", "f_z", "f_zn", "norm_full", "norm_A", "norm_B", "psiA_bound", "flags"};
  doc["rows"] = std::move(rows);
  doc["dB_ewa"] = matrix_to_json(r.d_b);
  doc["max_dB_entry"] = r.max_db_entry;
  doc["dB_quadrature_gap"] = r.db_quadrature_gap ? json(*r.db_quadrature_gap) : json(nullptr);
  return doc;
}

std::string summary_csv(const experiments::SweepResult& sweep) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& row : sweep.summary) {
    out += format_number(row.axis_value) + ',' + format_number(row.f_ewa.min) + ',' + format_number(row.f_zn.min) +
           ',' + format_number(row.max_db_entry) + '\n';
  }
  return out;
}

json summary_json(const experiments::SweepResult& sweep) {
  json rows = json::array();
  for (const auto& row : sweep.summary) {
    rows.push_back({{"axis_value", row.axis_value},
                    {"min_f_ewa", number_or_null(row.f_ewa.min)},
                    {"mean_f_ewa", number_or_null(row.f_ewa.mean)},
                    {"min_f_z", number_or_null(row.f_z.min)},
                    {"mean_f_z", number_or_null(row.f_z.mean)},
                    {"min_f_zn", number_or_null(row.f_zn.min)},
                    {"mean_f_zn", number_or_null(row.f_zn.mean)},
                    {"max_dB_entry", row.max_db_entry}});
  }
  return {{"axis", sweep.axis_name}, {"rows", rows}};
}

std::string bound_csv(const experiments::ScenarioResult& r) {
  std::string out(kBoundHeader);
  out += '\n';
  for (std::size_t k = 0; k < r.exact.size(); ++k)
    out += format_number(r.exact.times[k]) + ',' + format_number(r.exact.norms_a[k]) + ',' +
           format_number(r.psi_a_bound[k]) + '\n';
  return out;
}

json bound_json(const experiments::ScenarioResult& r) {
  json rows = json::array();
  for (std::size_t k = 0; k < r.exact.size(); ++k)
    rows.push_back({r.exact.times[k], r.exact.norms_a[k], r.psi_a_bound[k]});
  return {{"label", r.label}, {"columns", {"t", "norm_A", "psiA_bound"}}, {"rows", rows}};
}

}  // namespace evanescent::io
