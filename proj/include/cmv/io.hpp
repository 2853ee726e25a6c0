#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmv/alflows.hpp"
#include "cmv/core.hpp"

namespace cmv {

using json = nlohmann::json;

// JSON layouts. Complex numbers are [re, im] pairs; doubles are written in
// shortest round-trip form.
//   VerblunskySet:        {"n": 3, "alpha": [[re, im], ...]}
//   matrix:               {"rows": r, "cols": c, "entries": [[[re, im], ...], ...]}
//   SpectralMeasureCircle {"points": [{"theta": t, "weight": w}, ...]}
//   SpectralMeasureLine   {"points": [{"x": x, "weight": w}, ...]}
//   JacobiMatrix          {"b": [...], "a": [...]}
//   Trajectory            {"times": [...], "states": [...], "diagnostics": [...]}

json to_json(const VerblunskySet& v);
json to_json(const CMatrix& m);
json to_json(const SpectralMeasureCircle& mu);
json to_json(const SpectralMeasureLine& mu);
json to_json(const JacobiMatrix& J);
json to_json(const Trajectory& t);

VerblunskySet verblunsky_from_json(const json& j);
CMatrix matrix_from_json(const json& j);
SpectralMeasureCircle circle_measure_from_json(const json& j);
SpectralMeasureLine line_measure_from_json(const json& j);
JacobiMatrix jacobi_from_json(const json& j);
Trajectory trajectory_from_json(const json& j);

/// Throws Error(Parse) with the parser's message.
json parse_json(std::string_view text);

/// printf("%.17g")
std::string format_double(double x);

/// One row per line, comma separated, 17 significant digits.
void write_csv(std::ostream& out, const std::vector<std::vector<double>>& rows);
/// Skips blank lines and lines starting with '#'. Throws Error(Parse).
std::vector<std::vector<double>> read_csv(std::istream& in);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cmv
