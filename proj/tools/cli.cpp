#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cmv/alflows.hpp"
#include "cmv/ensembles.hpp"
#include "cmv/io.hpp"
#include "cmv/opuc.hpp"
#include "cmv/verify.hpp"

namespace cmv::cli {

namespace {

struct SampleArgs {
  std::string family;
  std::size_t n = 0;
  double beta = 2.0;
  double a = 0.0;
  double b = 0.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string coeffs;
  unsigned threads = 0;
};

struct FlowArgs {
  std::string init;
  bool random = false;
  std::size_t n = 4;
  std::uint64_t seed = 0;
  int m = 1;
  std::string part = "re";
  double t = 0.0;
  double dt = 1e-3;
  std::string method = "rk4";
  std::string out = "-";
  std::size_t stride = 1;
};

struct SpectralArgs {
  std::string in;
  std::string out = "-";
};

struct VerifyArgs {
  std::string suite;
  std::size_t n = 4;
  std::size_t trials = 100;
  std::uint64_t seed = 7;
  std::string report;
};

struct HistogramArgs {
  std::string in = "-";
  std::size_t bins = 0;
  std::optional<double> lo;
  std::optional<double> hi;
  std::string out = "-";
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-")
    out << text;
  else
    write_file(path, text);
}

std::string slurp(const std::string& path) {
  if (path != "-") return read_file(path);
  std::ostringstream ss;
  ss << std::cin.rdbuf();
  return ss.str();
}

unsigned thread_budget(unsigned requested) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (requested != 0) hw = std::min(hw, requested);
  if (const char* env = std::getenv("CMV_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) hw = std::min<unsigned>(hw, unsigned(cap));
  }
  return hw;
}

int cmd_sample(const SampleArgs& a, bool quiet, std::ostream& out, std::ostream& err) {
  EnsembleSpec spec{parse_family(a.family), a.n, a.beta, a.a, a.b};
  spec.validate();
  const unsigned threads = thread_budget(a.threads);
  if (!quiet) err << "sampling " << a.count << " replicas on " << threads << " thread(s)\n";
  const auto batch = sample_batch(spec, a.seed, a.count, threads, !a.coeffs.empty());
  std::ostringstream csv;
  write_csv(csv, batch.eigenvalues);
  emit(a.out, csv.str(), out);
  if (!a.coeffs.empty()) {
    json models = json::array();
    for (const auto& m : batch.models) std::visit([&](const auto& x) { models.push_back(to_json(x)); }, m);
    json doc{{"family", a.family}, {"n", a.n}, {"beta", a.beta}, {"seed", a.seed}, {"models", std::move(models)}};
    if (spec.family == Family::jacobi) {
      doc["a"] = a.a;
      doc["b"] = a.b;
    }
    write_file(a.coeffs, doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_flow(const FlowArgs& a, bool quiet, std::ostream& out, std::ostream& err) {
  const Part part = parse_part(a.part);
  if (a.method != "rk4" && a.method != "spectral")
    throw Error(ErrorKind::InvalidArgument, "method must be 'rk4' or 'spectral'");
  const VerblunskySet v0 = [&] {
    if (!a.init.empty()) return verblunsky_from_json(parse_json(slurp(a.init)));
    RngStream rng(a.seed, 0);
    return random_verblunsky(a.n, 0.7, rng);
  }();
  const IntegrateOptions options{a.stride, true};
  const Trajectory traj = a.method == "rk4"
                              ? integrate_flow(v0, a.m, part, a.t, a.dt, options)
                              : spectral_trajectory(v0, lax_equivalent_spec(a.m, part), a.t, a.dt, options);
  if (!quiet)
    err << "flow: " << traj.states.size() << " states, max eigenvalue drift " << traj.max_eigenvalue_drift()
        << "\n";
  emit(a.out, to_json(traj).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_spectral(const SpectralArgs& a, std::ostream& out) {
  const json in = parse_json(slurp(a.in));
  json result;
  if (in.is_object() && in.contains("alpha")) {
    result = to_json(unitary_eigensystem(build_cmv(verblunsky_from_json(in))));
  } else if (in.is_object() && in.contains("b") && in.contains("a")) {
    result = to_json(jacobi_eigensystem(jacobi_from_json(in)));
  } else if (in.is_object() && in.contains("points") && in["points"].is_array() && !in["points"].empty() &&
             in["points"][0].contains("theta")) {
    result = to_json(verblunsky_from_measure(circle_measure_from_json(in)));
  } else {
    throw Error(ErrorKind::Parse, "input is neither Verblunsky coefficients, a Jacobi matrix nor a circle measure");
  }
  emit(a.out, result.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, bool quiet, std::ostream& out, std::ostream& err) {
  if (!is_known_suite(a.suite)) {
    err << "unknown suite '" << a.suite << "'\n";
    return kExitUsage;
  }
  const VerifyReport report = run_suite(a.suite, a.n, a.trials, a.seed);
  if (!a.report.empty()) write_file(a.report, to_json(report).dump(2) + "\n");
  if (!quiet)
    for (const auto& r : report.identities)
      out << (r.pass ? "PASS " : "FAIL ") << r.name << " max_residual=" << format_double(r.max_residual)
          << " tolerance=" << r.tolerance << " checks=" << r.checks << "\n";
  return report.pass() ? kExitOk : kExitVerification;
}

int cmd_histogram(const HistogramArgs& a, std::ostream& out, std::ostream& err) {
  std::istringstream in(slurp(a.in));
  std::vector<double> values;
  for (const auto& row : read_csv(in)) values.insert(values.end(), row.begin(), row.end());
  if (values.empty()) {
    err << "histogram: no samples in input\n";
    return kExitUsage;
  }
  const double lo = a.lo.value_or(*std::min_element(values.begin(), values.end()));
  const double hi = a.hi.value_or(*std::max_element(values.begin(), values.end()));
  if (!(hi >= lo)) throw Error(ErrorKind::InvalidArgument, "histogram range is empty");
  std::vector<std::size_t> counts(a.bins, 0);
  const double width = (hi - lo) / double(a.bins);
  for (double x : values) {
    if (!(x >= lo && x <= hi)) continue;
    std::size_t k = width > 0 ? std::size_t((x - lo) / width) : 0;
    if (k >= a.bins) k = a.bins - 1;
    // Guard the floating-point edge: keep bins half-open [lower, upper).
    while (k > 0 && x < lo + double(k) * width) --k;
    while (k + 1 < a.bins && x >= lo + double(k + 1) * width) ++k;
    ++counts[k];
  }
  std::ostringstream csv;
  csv << "# lower,upper,count\n";
  for (std::size_t k = 0; k < a.bins; ++k) {
    const double upper = k + 1 == a.bins ? hi : lo + double(k + 1) * width;
    csv << format_double(lo + double(k) * width) << ',' << format_double(upper) << ',' << counts[k] << '\n';
  }
  emit(a.out, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CMV matrices, beta ensembles and Ablowitz-Ladik flows", "cmv"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet,-q", quiet, "Suppress progress on standard error");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample a beta ensemble and write sorted eigenvalues (CSV)");
  sample->add_option("--family", sa.family, "circular | jacobi | hermite")
      ->required()
      ->check(CLI::IsMember({"circular", "jacobi", "hermite"}));
  sample->add_option("--n", sa.n, "Matrix size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--beta", sa.beta, "Inverse temperature")->capture_default_str();
  sample->add_option("--a", sa.a, "Jacobi parameter a > -1")->capture_default_str();
  sample->add_option("--b", sa.b, "Jacobi parameter b > -1")->capture_default_str();
  sample->add_option("--count", sa.count, "Number of replicas")->required();
  sample->add_option("--seed", sa.seed, "64-bit seed")->required();
  sample->add_option("--out", sa.out, "Eigenvalue CSV path ('-' for stdout)")->capture_default_str();
  sample->add_option("--coeffs", sa.coeffs, "Also write the sampled models as JSON");
  sample->add_option("--threads", sa.threads, "Thread cap (CMV_THREADS also applies)");
  sample->add_flag("--quiet,-q", quiet, "Suppress progress on standard error");

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "Integrate an Ablowitz-Ladik hierarchy flow");
  auto* init = flow->add_option("--init", fa.init, "Initial VerblunskySet JSON ('-' for stdin)");
  auto* random = flow->add_flag("--random", fa.random, "Random initial coefficients (needs --seed)");
  init->excludes(random);
  flow->add_option("--n", fa.n, "Size for --random")->capture_default_str()->check(CLI::PositiveNumber);
  auto* flow_seed = flow->add_option("--seed", fa.seed, "Seed for --random");
  random->needs(flow_seed);
  flow->add_option("--m", fa.m, "Hierarchy index m >= 1")->capture_default_str()->check(CLI::PositiveNumber);
  flow->add_option("--part", fa.part, "re | im")->capture_default_str()->check(CLI::IsMember({"re", "im"}));
  flow->add_option("--t", fa.t, "Final time")->required()->check(CLI::NonNegativeNumber);
  flow->add_option("--dt", fa.dt, "Step size")->capture_default_str()->check(CLI::PositiveNumber);
  flow->add_option("--method", fa.method, "rk4 | spectral")
      ->capture_default_str()
      ->check(CLI::IsMember({"rk4", "spectral"}));
  flow->add_option("--out", fa.out, "Trajectory JSON path ('-' for stdout)")->capture_default_str();
  flow->add_option("--stride", fa.stride, "Record every k-th step")->capture_default_str()->check(CLI::PositiveNumber);
  flow->add_flag("--quiet,-q", quiet, "Suppress progress on standard error");

  SpectralArgs pa;
  auto* spectral = app.add_subcommand("spectral", "Spectral map: coefficients <-> measure (auto-detected)");
  spectral->add_option("--in", pa.in, "Input JSON ('-' for stdin)")->required();
  spectral->add_option("--out", pa.out, "Output JSON path ('-' for stdout)")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a numerical identity suite");
  verify->add_option("--suite", va.suite, "brackets | jacobian | cotangent | canonical")->required();
  verify->add_option("--n", va.n, "Matrix size")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--trials", va.trials, "Random instances")->capture_default_str();
  verify->add_option("--seed", va.seed, "64-bit seed")->capture_default_str();
  verify->add_option("--report", va.report, "Write the JSON report here");
  verify->add_flag("--quiet,-q", quiet, "Suppress the per-identity summary");

  HistogramArgs ha;
  auto* histogram = app.add_subcommand("histogram", "Bin samples from a CSV file");
  histogram->add_option("--in", ha.in, "Sample CSV ('-' for stdin)")->capture_default_str();
  histogram->add_option("--bins", ha.bins, "Number of bins")->required()->check(CLI::PositiveNumber);
  histogram->add_option("--min", ha.lo, "Lower edge (default: sample minimum)");
  histogram->add_option("--max", ha.hi, "Upper edge (default: sample maximum)");
  histogram->add_option("--out", ha.out, "Output CSV path ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(sa, quiet, out, err);
    if (*flow) {
      if (fa.init.empty() && !fa.random) {
        err << "flow: one of --init or --random is required\n";
        return kExitUsage;
      }
      return cmd_flow(fa, quiet, out, err);
    }
    if (*spectral) return cmd_spectral(pa, out);
    if (*verify) return cmd_verify(va, quiet, out, err);
    if (*histogram) return cmd_histogram(ha, out, err);
  } catch (const Error& e) {
    err << "cmv: " << e.what() << "\n";
    return is_domain_error(e.kind()) ? kExitDomain : kExitUsage;
  } catch (const std::exception& e) {
    err << "cmv: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cmv::cli
