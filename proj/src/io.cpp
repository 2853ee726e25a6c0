#include "cmv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cmv {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_error("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number_field(const json& j, const char* key) {
  const json& x = field(j, key);
  if (!x.is_number()) parse_error(std::string("field '") + key + "' must be a number");
  return x.get<double>();
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) parse_error(std::string(what) + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

json to_json(const VerblunskySet& v) {
  json a = json::array();
  for (cplx z : v.alpha()) a.push_back(complex_json(z));
  return {{"n", v.n()}, {"alpha", std::move(a)}};
}

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

json to_json(const SpectralMeasureCircle& mu) {
  json pts = json::array();
  for (std::size_t j = 0; j < mu.size(); ++j)
    pts.push_back({{"theta", mu.thetas()[j]}, {"weight", mu.weights()[j]}});
  return {{"points", std::move(pts)}};
}

json to_json(const SpectralMeasureLine& mu) {
  json pts = json::array();
  for (std::size_t j = 0; j < mu.size(); ++j)
    pts.push_back({{"x", mu.points()[j]}, {"weight", mu.weights()[j]}});
  return {{"points", std::move(pts)}};
}

json to_json(const JacobiMatrix& J) {
  return {{"b", std::vector<double>(J.b().begin(), J.b().end())},
          {"a", std::vector<double>(J.a().begin(), J.a().end())}};
}

json to_json(const Trajectory& t) {
  json states = json::array(), diag = json::array();
  for (const auto& s : t.states) states.push_back(to_json(s));
  for (const auto& d : t.diagnostics)
    diag.push_back({{"eigenvalue_drift", d.eigenvalue_drift}, {"unitarity_residual", d.unitarity_residual}});
  return {{"times", t.times},
          {"states", std::move(states)},
          {"diagnostics", std::move(diag)},
          {"max_eigenvalue_drift", t.max_eigenvalue_drift()}};
}

VerblunskySet verblunsky_from_json(const json& j) {
  const json& a = field(j, "alpha");
  if (!a.is_array()) parse_error("'alpha' must be an array");
  std::vector<cplx> alpha;
  for (const auto& z : a) alpha.push_back(complex_from(z));
  if (j.contains("n")) {
    const json& n = j.at("n");
    if (!n.is_number_unsigned() || n.get<std::size_t>() != alpha.size())
      parse_error("'n' does not match the number of coefficients");
  }
  return VerblunskySet(std::move(alpha));
}

CMatrix matrix_from_json(const json& j) {
  const json& e = field(j, "entries");
  if (!e.is_array()) parse_error("'entries' must be an array of rows");
  const auto rows = Eigen::Index(e.size());
  const auto cols = rows == 0 ? Eigen::Index(0) : Eigen::Index(e[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = e[std::size_t(r)];
    if (!row.is_array() || Eigen::Index(row.size()) != cols) parse_error("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(row[std::size_t(c)]);
  }
  return m;
}

SpectralMeasureCircle circle_measure_from_json(const json& j) {
  std::vector<double> th, w;
  for (const auto& p : field(j, "points")) {
    th.push_back(number_field(p, "theta"));
    w.push_back(number_field(p, "weight"));
  }
  return SpectralMeasureCircle(std::move(th), std::move(w));
}

SpectralMeasureLine line_measure_from_json(const json& j) {
  std::vector<double> x, w;
  for (const auto& p : field(j, "points")) {
    x.push_back(number_field(p, "x"));
    w.push_back(number_field(p, "weight"));
  }
  return SpectralMeasureLine(std::move(x), std::move(w));
}

JacobiMatrix jacobi_from_json(const json& j) {
  return JacobiMatrix(number_array(field(j, "b"), "b"), number_array(field(j, "a"), "a"));
}

Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.times = number_array(field(j, "times"), "times");
  for (const auto& s : field(j, "states")) t.states.push_back(verblunsky_from_json(s));
  if (j.contains("diagnostics")) {
    for (const auto& d : j.at("diagnostics"))
      t.diagnostics.push_back({number_field(d, "eigenvalue_drift"),
                               number_field(d, "unitarity_residual")});
  }
  if (t.times.size() != t.states.size()) parse_error("times and states differ in length");
  return t;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(e.what());
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

std::vector<std::vector<double>> read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) parse_error("empty cell on line " + std::to_string(lineno));
      const std::string trimmed = cell.substr(first, last - first + 1);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(trimmed, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != trimmed.size()) parse_error("bad number '" + trimmed + "' on line " + std::to_string(lineno));
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

}  // namespace cmv
