#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "fracgrad/acceptance.hpp"
#include "fracgrad/analysis.hpp"
#include "fracgrad/config.hpp"
#include "fracgrad/constants.hpp"
#include "fracgrad/experiments.hpp"
#include "fracgrad/minors.hpp"
#include "fracgrad/parallel.hpp"
#include "fracgrad/quadrature.hpp"
#include "fracgrad/spectral.hpp"

namespace py = pybind11;
using namespace fracgrad;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Arrays carry rank leading component axes ((), (n,), (n, n)) followed by n
// grid axes of length N; the box length travels separately.
template <int R>
Field<R> to_field(const Array& a, double L) {
  const int nd = static_cast<int>(a.ndim());
  const int n = R == 0 ? nd : (R == 1 ? nd - 1 : nd - 2);
  if (n < 1) throw RangeError("array has too few axes for this field rank");
  for (int r = 0; r < R; ++r) {
    if (a.shape(r) != n) throw RangeError("component axes must have length n");
  }
  const auto N = a.shape(R);
  for (int d = R; d < nd; ++d) {
    if (a.shape(d) != N) throw RangeError("grid axes must all have the same length");
  }
  const Grid grid = make_grid(n, L, static_cast<int>(N));
  return Field<R>(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

template <int R>
Array to_array(const Field<R>& f) {
  std::vector<py::ssize_t> shape;
  for (int r = 0; r < R; ++r) shape.push_back(f.grid().n);
  for (int d = 0; d < f.grid().n; ++d) shape.push_back(f.grid().N);
  Array out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

int rank_of(const Array& a, int n) { return static_cast<int>(a.ndim()) - n; }

quadrature::QuadratureScheme scheme_named(const std::string& name) {
  if (name == "corrected") return {};
  if (name == "plain") return quadrature::QuadratureScheme::plain();
  throw RangeError("scheme must be 'corrected' or 'plain'");
}

py::list table_rows(const SweepTable& t) {
  py::list rows;
  for (const auto& row : t.rows()) {
    py::dict d;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { d[py::str(t.columns()[i])] = v; }, row[i]);
    }
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Riesz fractional gradient and divergence on periodic grids";

  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_MemoryError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);

  m.attr("__version__") = FRACGRAD_VERSION;

  m.def("c_ns", &constants::c_ns, py::arg("n"), py::arg("s"));
  m.def("c_ns_over_one_minus_s", &constants::c_ns_over_one_minus_s, py::arg("n"), py::arg("s"));
  m.def("gamma_riesz", &constants::gamma_riesz, py::arg("n"), py::arg("alpha"));
  m.def("lattice_zeta", &constants::lattice_zeta, py::arg("n"), py::arg("sigma"));
  m.def("set_thread_count", &set_thread_count, py::arg("threads"));

  m.def(
      "coordinates",
      [](double L, int N) {
        const Grid g = make_grid(1, L, N);
        Array x(N);
        for (int j = 0; j < N; ++j) x.mutable_at(j) = g.coordinate(j);
        return x;
      },
      py::arg("L"), py::arg("N"), "Cell-centre coordinates along one axis.");

  m.def(
      "fractional_gradient",
      [](const Array& u, double L, double s, bool vector) -> py::object {
        if (vector) return to_array(spectral::fractional_gradient(to_field<1>(u, L), s));
        return to_array(spectral::fractional_gradient(to_field<0>(u, L), s));
      },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("vector") = false,
      "Spectral D^s (s = 1 is the classical gradient). A scalar field (N,)*n gives (n, N, ...); "
      "with vector=True a field (n, N, ...) gives (n, n, N, ...).");
  m.def(
      "fractional_divergence",
      [](const Array& phi, double L, double s) {
        return to_array(spectral::fractional_divergence(to_field<1>(phi, L), s));
      },
      py::arg("phi"), py::arg("L"), py::arg("s"));
  m.def(
      "riesz_potential",
      [](const Array& f, double L, double alpha) {
        return to_array(spectral::riesz_potential(to_field<0>(f, L), alpha));
      },
      py::arg("f"), py::arg("L"), py::arg("alpha"));
  m.def(
      "ftc_reconstruct",
      [](const Array& V, double L, double s) { return to_array(spectral::ftc_reconstruct(to_field<1>(V, L), s)); },
      py::arg("V"), py::arg("L"), py::arg("s"));

  m.def(
      "fractional_gradient_direct",
      [](const Array& u, double L, double s, const std::string& scheme) {
        return to_array(quadrature::fractional_gradient_direct(to_field<0>(u, L), s, scheme_named(scheme)));
      },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("scheme") = "corrected");
  m.def(
      "fractional_divergence_direct",
      [](const Array& phi, double L, double s, const std::string& scheme) {
        return to_array(quadrature::fractional_divergence_direct(to_field<1>(phi, L), s, scheme_named(scheme)));
      },
      py::arg("phi"), py::arg("L"), py::arg("s"), py::arg("scheme") = "corrected");

  m.def(
      "gagliardo_seminorm",
      [](const Array& u, double L, double s, double p) {
        return analysis::gagliardo_seminorm(to_field<0>(u, L), s, p);
      },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("p") = 2.0);
  m.def(
      "hsp_norm",
      [](const Array& u, double L, double s, double p) { return analysis::hsp_norm(to_field<0>(u, L), s, p); },
      py::arg("u"), py::arg("L"), py::arg("s"), py::arg("p") = 2.0);

  m.def(
      "det_field",
      [](const Array& F) {
        const int n = static_cast<int>(F.ndim()) - 2;
        if (n < 1 || rank_of(F, n) != 2) throw RangeError("expected an array of shape (n, n, N, ...)");
        return to_array(minors::det_field(to_field<2>(F, 1.0)));
      },
      py::arg("F"), "Pointwise determinant of a matrix field of shape (n, n, N, ...).");
  m.def(
      "cof_field",
      [](const Array& F) { return to_array(minors::cof_field(to_field<2>(F, 1.0))); }, py::arg("F"));
  m.def(
      "det_ibp_residual",
      [](const Array& u, const Array& phi, double L, double s) {
        const VectorField uf = to_field<1>(u, L);
        const int n = uf.grid().n;
        std::vector<int> all(n);
        for (int a = 0; a < n; ++a) all[a] = a;
        const auto r = minors::det_ibp_residual(uf, s, minors::make_minor_index(n, all, all), to_field<0>(phi, L));
        return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("residual") = r.residual);
      },
      py::arg("u"), py::arg("phi"), py::arg("L"), py::arg("s"),
      "Both sides of the determinant integration by parts for the full n x n minor.");

  m.def(
      "constants_table",
      [](int n, const std::vector<double>& s_grid) { return table_rows(experiments::constants_table(n, s_grid)); },
      py::arg("n"), py::arg("s_grid"));
  m.def(
      "gamma",
      [](const std::string& config_json) {
        const auto cfg = config::parse_gamma_config(config::parse_json(config_json));
        variational::GammaResult res;
        {
          py::gil_scoped_release release;
          res = experiments::gamma(cfg);
        }
        return py::dict(py::arg("table") = table_rows(res.table), py::arg("recovery") = table_rows(res.recovery),
                        py::arg("local_minimizer") = to_array(res.local_minimizer));
      },
      py::arg("config_json"), "Gamma-convergence sweep from a JSON config string.");
  m.def(
      "selftest",
      [](const std::vector<int>& only) {
        acceptance::Options opts;
        opts.only = only;
        std::vector<acceptance::CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = acceptance::run(opts);
        }
        py::list out;
        for (const auto& r : results) {
          out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("value") = r.value,
                              py::arg("threshold") = r.threshold, py::arg("passed") = r.passed));
        }
        return out;
      },
      py::arg("only") = std::vector<int>{});
}
