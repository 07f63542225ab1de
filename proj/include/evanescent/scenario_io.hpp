#pragma once

// Scenario files (JSON, strict keys, complex numbers as [re, im]) and the
// CSV/JSON tables written by the command-line tool.

#include <string>
#include <string_view>

#include "json.hpp"

#include "evanescent/errors.hpp"
#include "evanescent/experiments.hpp"
#include "evanescent/model.hpp"

namespace evanescent::io {

/// Malformed scenario document: bad JSON syntax (with line and column), a
/// missing or unknown key, or a value of the wrong type (with its field path).
class ParseError : public Error {
 public:
  using Error::Error;
};

model::Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const model::Scenario& sc);

/// Parses and validates. Throws ParseError or ValidationError.
model::Scenario parse_scenario(std::string_view text);
model::Scenario load_scenario(const std::string& path);

/// Fixed header of the per-time output table.
inline constexpr std::string_view kOutputHeader = "t,f_ewa,f_z,f_zn,norm_full,norm_A,norm_B,psiA_bound,flags";
inline constexpr std::string_view kSummaryHeader = "axis_value,min_f_ewa,min_f_zn,max_dB_entry";
inline constexpr std::string_view kBoundHeader = "t,norm_A,psiA_bound";

/// Decimal with 16 significant digits; "nan" for NaN.
std::string format_number(double value);

std::string output_csv(const experiments::ScenarioResult& result);
nlohmann::json output_json(const experiments::ScenarioResult& result);

std::string summary_csv(const experiments::SweepResult& sweep);
nlohmann::json summary_json(const experiments::SweepResult& sweep);

std::string bound_csv(const experiments::ScenarioResult& result);
nlohmann::json bound_json(const experiments::ScenarioResult& result);

}  // namespace evanescent::io
