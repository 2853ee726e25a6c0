#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cmv/alflows.hpp"
#include "cmv/io.hpp"
#include "cmv/opuc.hpp"
#include "support.hpp"

using namespace cmv;
using testing::Gen;

namespace {

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("JSON round trips are bit exact") {
  Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = gen.verblunsky(gen.index(1, 9));
    CHECK(verblunsky_from_json(parse_json(to_json(v).dump())) == v);
    const CMatrix C = build_cmv(v).entries();
    CHECK(matrix_from_json(parse_json(to_json(C).dump())) == C);
    const auto mu = unitary_eigensystem(build_cmv(v));
    CHECK(circle_measure_from_json(parse_json(to_json(mu).dump())) == mu);
  }
  const JacobiMatrix J({0.1, -1.0 / 3.0, 2.5}, {0.7, 1e-300});
  CHECK(jacobi_from_json(parse_json(to_json(J).dump())) == J);
  const SpectralMeasureLine line({-1.0 / 7.0, 0.5}, {0.25, 0.75});
  CHECK(line_measure_from_json(parse_json(to_json(line).dump())) == line);

  const auto traj = integrate_flow(gen.verblunsky(4, 0.5), 1, Part::Re, 0.1, 0.01, {3, true});
  const auto back = trajectory_from_json(parse_json(to_json(traj).dump()));
  CHECK(back.times == traj.times);
  CHECK(back.states == traj.states);
  REQUIRE(back.diagnostics.size() == traj.diagnostics.size());
  CHECK(back.diagnostics.back().unitarity_residual == traj.diagnostics.back().unitarity_residual);
}

TEST_CASE("JSON layout") {
  const VerblunskySet v({cplx{0.5, -0.25}, cplx{0.0, 1.0}});
  const json j = to_json(v);
  CHECK(j.at("n") == 2);
  CHECK(j.at("alpha")[0][1] == -0.25);
  CMatrix m(2, 3);
  m << 1.0, 2.0, 3.0, 4.0, 5.0, cplx(6.0, 7.0);
  const json jm = to_json(m);
  CHECK(jm.at("rows") == 2);
  CHECK(jm.at("cols") == 3);
  CHECK(jm.at("entries")[1][2][1] == 7.0);
}

TEST_CASE("JSON errors") {
  CHECK(kind_of([] { parse_json("{not json"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { verblunsky_from_json(parse_json(R"({"n": 1})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { verblunsky_from_json(parse_json(R"({"alpha": [[1, 0]], "n": 2})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { verblunsky_from_json(parse_json(R"({"alpha": [["a", 0]]})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { verblunsky_from_json(parse_json(R"({"alpha": [[0.5, 0]]})")); }) ==
        ErrorKind::InvalidVerblunsky);
  CHECK(kind_of([] { matrix_from_json(parse_json(R"({"entries": [[[1,0]], [[1,0],[2,0]]]})")); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] { circle_measure_from_json(parse_json(R"({"points": [{"theta": 0}]})")); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([] { jacobi_from_json(parse_json(R"({"b": [0, 1], "a": "x"})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { trajectory_from_json(parse_json(R"({"times": [0, 1], "states": []})")); }) ==
        ErrorKind::Parse);
}

TEST_CASE("CSV") {
  const std::vector<std::vector<double>> rows{{0.1, -1.0 / 3.0, 1e-300}, {6.02e23}, {}};
  std::stringstream ss;
  write_csv(ss, rows);
  CHECK(ss.str().find("0.10000000000000001") != std::string::npos);
  const auto back = read_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == rows[0]);
  CHECK(back[1] == rows[1]);

  std::stringstream with_comments("# header\n\n1, 2\r\n");
  CHECK(read_csv(with_comments) == std::vector<std::vector<double>>{{1.0, 2.0}});
  std::stringstream bad("1,x\n");
  CHECK(kind_of([&] { read_csv(bad); }) == ErrorKind::Parse);
  std::stringstream empty_cell("1,,2\n");
  CHECK(kind_of([&] { read_csv(empty_cell); }) == ErrorKind::Parse);
  std::stringstream trailing("1.5abc\n");
  CHECK(kind_of([&] { read_csv(trailing); }) == ErrorKind::Parse);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("files") {
  const auto path = std::filesystem::temp_directory_path() / "cmv_io_test.json";
  write_file(path, "{\"x\": 1}");
  CHECK(read_file(path) == "{\"x\": 1}");
  std::filesystem::remove(path);
  CHECK(kind_of([&] { read_file(path); }) == ErrorKind::InvalidArgument);
}
