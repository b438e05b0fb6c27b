#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qnr/blockops.hpp"
#include "qnr/bounds.hpp"
#include "qnr/errors.hpp"
#include "qnr/nrange.hpp"
#include "qnr/qrange.hpp"
#include "qnr/spectral.hpp"
#include "qnr/version.hpp"

namespace py = pybind11;
using qnr::ComplexMatrix;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1) || arr.shape(0) == 0) {
    throw qnr::Error(qnr::ErrorKind::InvalidInput, "expected a non-empty square 2-D array");
  }
  const auto n = static_cast<std::size_t>(arr.shape(0));
  std::vector<qnr::cplx> data(arr.data(), arr.data() + n * n);
  ComplexMatrix m(n, std::move(data));
  if (!m.all_finite()) throw qnr::Error(qnr::ErrorKind::InvalidInput, "matrix entries must be finite");
  return m;
}

CArray to_array(const ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  CArray out({n, n});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::optional<ComplexMatrix> maybe(const std::optional<CArray>& a) {
  if (!a) return std::nullopt;
  return to_matrix(*a);
}

std::string reports_json(const std::vector<qnr::BoundCheckReport>& reps) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reps) arr.push_back(qnr::to_json(r));
  return arr.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "q-numerical radius toolkit (compiled core)";
  m.attr("__version__") = qnr::kVersion;

  py::register_exception<qnr::Error>(m, "QnrError", PyExc_ValueError);

  m.def("numerical_radius", [](const CArray& a) { return qnr::numerical_radius(to_matrix(a)); }, py::arg("a"));
  m.def("operator_norm", [](const CArray& a) { return qnr::operator_norm(to_matrix(a)); }, py::arg("a"));
  m.def("spectral_radius", [](const CArray& a) { return qnr::spectral_radius(to_matrix(a)); }, py::arg("a"));
  m.def(
      "q_radius",
      [](const CArray& a, std::complex<double> q, int restarts, std::uint64_t seed) {
        qnr::QEstimateOptions o;
        o.restarts = restarts;
        o.seed = seed;
        const auto est = qnr::q_radius_estimate(to_matrix(a), q, o);
        py::dict d;
        d["value"] = est.value;
        d["converged"] = est.converged;
        d["restarts"] = est.restarts_used;
        d["witness_x"] = est.witness_x;
        return d;
      },
      py::arg("a"), py::arg("q"), py::arg("restarts") = 0, py::arg("seed") = 42);
  m.def("q_radius_hermitian",
        [](const CArray& a, std::complex<double> q) { return qnr::q_radius_hermitian(to_matrix(a), q); },
        py::arg("a"), py::arg("q"));
  m.def("q_radius_bruteforce_2x2",
        [](const CArray& a, std::complex<double> q, int grid) {
          return qnr::q_radius_bruteforce_2x2(to_matrix(a), q, grid);
        },
        py::arg("a"), py::arg("q"), py::arg("grid") = 500);
  m.def("transcendental_radius",
        [](const CArray& a, int restarts, std::uint64_t seed) {
          return qnr::transcendental_radius_sup(to_matrix(a), restarts, seed);
        },
        py::arg("a"), py::arg("restarts") = 0, py::arg("seed") = 42);
  m.def("sector_angle", [](const CArray& a) { return qnr::sector_angle(to_matrix(a)).alpha; }, py::arg("a"));
  m.def("offdiag_hermitian_closed_form",
        [](const std::vector<double>& eigenvalues, std::complex<double> q) {
          return qnr::offdiag_hermitian_closed_form(eigenvalues, q);
        },
        py::arg("eigenvalues"), py::arg("q"));
  m.def("make_offdiag",
        [](const CArray& x, const CArray& y) { return to_array(qnr::make_offdiag(to_matrix(x), to_matrix(y)).assembled); },
        py::arg("x"), py::arg("y"));
  m.def("generate_sectorial",
        [](std::size_t n, double alpha, std::uint64_t seed) {
          const auto s = qnr::generate_sectorial(n, alpha, seed);
          return py::make_tuple(to_array(s.matrix), s.alpha_certified);
        },
        py::arg("n"), py::arg("alpha"), py::arg("seed"));
  m.def("bound_registry", &qnr::bound_registry);
  m.def(
      "_evaluate_bound",
      [](const std::string& id, const CArray& a, const std::optional<CArray>& b,
         const std::optional<CArray>& c, const std::optional<CArray>& d, std::complex<double> q,
         std::optional<double> t, std::optional<double> alpha, std::optional<double> gamma,
         int restarts, std::uint64_t seed) {
        qnr::BoundInputs in;
        in.a = to_matrix(a);
        in.b = maybe(b);
        in.c = maybe(c);
        in.d = maybe(d);
        in.q = q;
        in.t = t;
        in.alpha = alpha;
        in.gamma = gamma;
        qnr::EvaluatorOptions eo;
        eo.restarts = restarts;
        eo.seed = seed;
        qnr::Evaluator ev(eo);
        return reports_json(qnr::evaluate_bound(id, in, ev));
      },
      py::arg("bound_id"), py::arg("a"), py::arg("b") = py::none(), py::arg("c") = py::none(),
      py::arg("d") = py::none(), py::arg("q") = 0.5, py::arg("t") = py::none(), py::arg("alpha") = py::none(),
      py::arg("gamma") = py::none(), py::arg("restarts") = 0, py::arg("seed") = 42);
  m.def(
      "_fuzz_summary",
      [](const std::string& bounds, int trials, std::uint64_t seed) {
        qnr::FuzzConfig cfg;
        cfg.bound_ids = qnr::parse_bound_list(bounds);
        cfg.trials = trials;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return qnr::summary_json(qnr::fuzz(cfg).summary).dump();
      },
      py::arg("bounds"), py::arg("trials"), py::arg("seed") = 42);
  m.def(
      "threshold_crossover",
      [](double alpha, double step) { return qnr::threshold_curve(alpha, qnr::make_grid(0.0, 1.0, step)).crossover; },
      py::arg("alpha"), py::arg("step") = 0.001);
}
