#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmv/alflows.hpp"
#include "cmv/brackets.hpp"
#include "cmv/ensembles.hpp"
#include "cmv/io.hpp"
#include "cmv/opuc.hpp"
#include "cmv/verify.hpp"

namespace py = pybind11;
using namespace cmv;

namespace {

std::vector<cplx> to_vector(std::span<const cplx> s) { return {s.begin(), s.end()}; }
std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict report_dict(const AsymptoticReport& r) {
  py::dict d;
  d["k"] = r.k;
  d["lambdas"] = r.lambdas;
  d["thetas"] = r.thetas;
  d["masses"] = r.masses;
  d["predicted_limit"] = r.predicted_limit;
  d["predicted_rate"] = r.predicted_rate;
  d["xi"] = r.xi;
  d["fitted_limit"] = r.fitted_limit;
  d["fitted_rate"] = r.fitted_rate;
  d["fitted_xi"] = r.fitted_xi;
  d["predicted_mass_rate"] = r.predicted_mass_rate;
  d["fitted_mass_rate"] = r.fitted_mass_rate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CMV matrices, beta ensembles and Ablowitz-Ladik flows";

  py::register_exception<Error>(m, "CmvError", PyExc_ValueError);

  py::class_<VerblunskySet>(m, "VerblunskySet")
      .def(py::init<std::vector<cplx>>(), py::arg("alpha"))
      .def_property_readonly("n", &VerblunskySet::n)
      .def_property_readonly("alpha", [](const VerblunskySet& v) { return to_vector(v.alpha()); })
      .def_property_readonly("rho", [](const VerblunskySet& v) { return to_vector(v.rho()); })
      .def("__len__", &VerblunskySet::n)
      .def("__eq__", [](const VerblunskySet& a, const VerblunskySet& b) { return a == b; })
      .def("__repr__", [](const VerblunskySet& v) { return "VerblunskySet(" + to_json(v).dump() + ")"; });

  py::class_<JacobiMatrix>(m, "JacobiMatrix")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("b"), py::arg("a"))
      .def_property_readonly("n", &JacobiMatrix::n)
      .def_property_readonly("b", [](const JacobiMatrix& J) { return to_vector(J.b()); })
      .def_property_readonly("a", [](const JacobiMatrix& J) { return to_vector(J.a()); })
      .def("dense", &JacobiMatrix::dense)
      .def("__repr__", [](const JacobiMatrix& J) { return "JacobiMatrix(" + to_json(J).dump() + ")"; });

  py::class_<SpectralMeasureCircle>(m, "SpectralMeasureCircle")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("thetas"), py::arg("weights"))
      .def_static("normalized", &SpectralMeasureCircle::normalized, py::arg("thetas"), py::arg("weights"))
      .def_property_readonly("thetas", [](const SpectralMeasureCircle& mu) { return to_vector(mu.thetas()); })
      .def_property_readonly("weights", [](const SpectralMeasureCircle& mu) { return to_vector(mu.weights()); })
      .def("__len__", &SpectralMeasureCircle::size)
      .def("__repr__", [](const SpectralMeasureCircle& mu) { return "SpectralMeasureCircle(" + to_json(mu).dump() + ")"; });

  py::class_<SpectralMeasureLine>(m, "SpectralMeasureLine")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("points"), py::arg("weights"))
      .def_property_readonly("points", [](const SpectralMeasureLine& mu) { return to_vector(mu.points()); })
      .def_property_readonly("weights", [](const SpectralMeasureLine& mu) { return to_vector(mu.weights()); })
      .def("__len__", &SpectralMeasureLine::size);

  // core / opuc
  m.def("build_cmv", [](const VerblunskySet& v) { return build_cmv(v).entries(); }, py::arg("v"));
  m.def("build_LM", [](const VerblunskySet& v) {
    auto f = build_LM(v);
    return py::make_tuple(f.L, f.M);
  }, py::arg("v"));
  m.def("unitary_eigensystem", py::overload_cast<const CMVMatrix&>(&unitary_eigensystem), py::arg("C"));
  m.def("spectral_measure", [](const VerblunskySet& v) { return unitary_eigensystem(build_cmv(v)); }, py::arg("v"));
  m.def("verblunsky_from_measure", &verblunsky_from_measure, py::arg("mu"));
  m.def("jacobi_eigensystem", &jacobi_eigensystem, py::arg("J"));
  m.def("geronimus", [](const std::vector<double>& alpha) { return geronimus_interior(alpha); }, py::arg("alpha"),
        "Jacobi matrix from real alpha_0..alpha_{2n-2}; alpha_{-1} = alpha_{2n-1} = -1 are implied.");
  m.def("szego_project", &szego_project, py::arg("mu"));
  py::class_<CMVMatrix>(m, "CMVMatrix")
      .def(py::init<VerblunskySet>())
      .def_property_readonly("entries", &CMVMatrix::entries);

  // ensembles
  m.def("sample_eigenvalues",
        [](const std::string& family, std::size_t n, std::size_t count, std::uint64_t seed, double beta, double a,
           double b, unsigned threads) {
          EnsembleSpec spec{parse_family(family), n, beta, a, b};
          py::gil_scoped_release release;
          return sample_batch(spec, seed, count, threads).eigenvalues;
        },
        py::arg("family"), py::arg("n"), py::arg("count"), py::arg("seed"), py::arg("beta") = 2.0,
        py::arg("a") = 0.0, py::arg("b") = 0.0, py::arg("threads") = 1);
  m.def("sample_circular", [](std::size_t n, double beta, std::uint64_t seed, std::uint64_t stream) {
    RngStream rng(seed, stream);
    return sample_circular_beta(n, beta, rng);
  }, py::arg("n"), py::arg("beta"), py::arg("seed"), py::arg("stream") = 0);

  // flows
  m.def("hamiltonian_K", [](const VerblunskySet& v, int k) { return hamiltonian_K(build_cmv(v), k); },
        py::arg("v"), py::arg("m"));
  m.def("lax_P", [](const VerblunskySet& v, int k, const std::string& part) {
    return lax_P(build_cmv(v), k, parse_part(part));
  }, py::arg("v"), py::arg("m"), py::arg("part") = "re");
  m.def("al_vector_field", [](const VerblunskySet& v, int k, const std::string& part) {
    return al_vector_field(v, k, parse_part(part));
  }, py::arg("v"), py::arg("m") = 1, py::arg("part") = "re");
  m.def("al_closed_form_field", &al_closed_form_field, py::arg("v"), py::arg("alpha_minus_one") = cplx{-1.0, 0.0});
  m.def("F_of_theta", [](const std::vector<cplx>& f, double theta) { return HamiltonianSpec(f).F(theta); },
        py::arg("f_coeffs"), py::arg("theta"));
  m.def("lax_equivalent_spec", [](int k, const std::string& part) {
    return to_vector(lax_equivalent_spec(k, parse_part(part)).coeffs());
  }, py::arg("m"), py::arg("part") = "re");

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_property_readonly("eigenvalue_drift", [](const Trajectory& t) {
        std::vector<double> d;
        for (const auto& x : t.diagnostics) d.push_back(x.eigenvalue_drift);
        return d;
      })
      .def_property_readonly("unitarity_residual", [](const Trajectory& t) {
        std::vector<double> d;
        for (const auto& x : t.diagnostics) d.push_back(x.unitarity_residual);
        return d;
      })
      .def("final_state", &Trajectory::final_state)
      .def("max_eigenvalue_drift", &Trajectory::max_eigenvalue_drift)
      .def("to_json", [](const Trajectory& t) { return to_json(t).dump(); });

  m.def("integrate_flow",
        [](const VerblunskySet& v, int k, const std::string& part, double t, double dt, std::size_t record_every) {
          py::gil_scoped_release release;
          return integrate_flow(v, k, parse_part(part), t, dt, {record_every, true});
        },
        py::arg("v"), py::arg("m"), py::arg("part"), py::arg("t"), py::arg("dt") = 1e-3,
        py::arg("record_every") = 1);
  m.def("flow_via_spectral", [](const VerblunskySet& v, const std::vector<cplx>& f, double t) {
    return flow_via_spectral(v, HamiltonianSpec(f), t);
  }, py::arg("v"), py::arg("f_coeffs"), py::arg("t"));
  m.def("exact_propagate", [](const SpectralMeasureCircle& mu, const std::vector<cplx>& f, double t) {
    return exact_propagate(mu, HamiltonianSpec(f), t);
  }, py::arg("mu"), py::arg("f_coeffs"), py::arg("t"));
  m.def("asymptotic_reports",
        [](const VerblunskySet& v, const std::vector<cplx>& f, const std::vector<double>& grid) {
          std::vector<AsymptoticReport> reps;
          {
            py::gil_scoped_release release;
            reps = asymptotic_reports(v, HamiltonianSpec(f), grid);
          }
          py::list out;
          for (const auto& r : reps) out.append(report_dict(r));
          return out;
        },
        py::arg("v"), py::arg("f_coeffs"), py::arg("t_grid"));
  m.def("schur_vector_field", [](const std::vector<double>& a, double before, double after) {
    return schur_vector_field(a, before, after);
  }, py::arg("alpha"), py::arg("before") = -1.0, py::arg("after") = 1.0);

  // brackets / verification
  m.def("spectral_to_verblunsky_jacobian", &spectral_to_verblunsky_jacobian, py::arg("mu"), py::arg("h") = 1e-3);
  m.def("jacobian_formula", &jacobian_formula, py::arg("mu"));
  m.def("cotangent_residual", [](const VerblunskySet& v, std::array<std::size_t, 3> labels) {
    return cotangent_residual(v, labels);
  }, py::arg("v"), py::arg("labels") = std::array<std::size_t, 3>{0, 1, 2});
  m.def("verblunsky_brackets", [](const VerblunskySet& v, std::size_t k, std::size_t l) {
    const auto b = verblunsky_brackets(v, k, l);
    return py::make_tuple(b.alpha_alpha, b.alpha_alphabar);
  }, py::arg("v"), py::arg("k"), py::arg("l"));
  m.def("run_suite_json", [](const std::string& suite, std::size_t n, std::size_t trials, std::uint64_t seed) {
    py::gil_scoped_release release;
    return to_json(run_suite(suite, n, trials, seed)).dump();
  }, py::arg("suite"), py::arg("n"), py::arg("trials"), py::arg("seed"));
  m.def("suite_names", &suite_names);
}
