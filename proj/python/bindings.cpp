#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vexs/convergence.hpp"
#include "vexs/errors.hpp"
#include "vexs/maximal.hpp"
#include "vexs/nonlocal.hpp"
#include "vexs/scenario.hpp"
#include "vexs/sphere.hpp"
#include "vexs/vex_spaces.hpp"

namespace py = pybind11;
using namespace vexs;

namespace {

Point to_point(const py::handle& h) {
  if (py::isinstance<py::float_>(h) || py::isinstance<py::int_>(h)) return Point{h.cast<double>()};
  const auto v = h.cast<std::vector<double>>();
  if (v.empty() || v.size() > 3) throw py::value_error("a point has 1 to 3 coordinates");
  return Point(std::span<const double>(v.data(), v.size()));
}

std::vector<double> from_point(const Point& x) {
  const auto c = x.coords();
  return {c.begin(), c.end()};
}

QuadratureSpec spec_or_default(const std::optional<QuadratureSpec>& q) { return q.value_or(QuadratureSpec{}); }

py::dict functional_dict(const FunctionalValue& v) {
  py::dict d;
  d["value"] = v.value;
  d["error_estimate"] = v.error_estimate;
  d["truncation_radius"] = v.truncation_radius;
  d["node_count"] = v.node_count;
  d["empty_superlevel"] = v.empty_superlevel;
  d["converged"] = v.converged;
  return d;
}

FieldPart part_of(const std::string& s) {
  if (s == "value") return FieldPart::value;
  if (s == "gradient") return FieldPart::gradient_norm;
  throw py::value_error("part must be 'value' or 'gradient'");
}

WeightMode mode_of(const std::string& s) {
  if (s == "unit") return WeightMode::unit;
  if (s == "p_of_x") return WeightMode::p_of_x;
  throw py::value_error("mode must be 'unit' or 'p_of_x'");
}

EpsMode eps_mode_of(const std::string& s) {
  if (s == "full") return EpsMode::full;
  if (s == "small_jump") return EpsMode::small_jump;
  if (s == "large_jump_tail") return EpsMode::large_jump_tail;
  throw py::value_error("mode must be 'full', 'small_jump' or 'large_jump_tail'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variable-exponent nonlocal functionals";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
  static py::exception<UnsupportedError> unsupported_error(m, "UnsupportedError", PyExc_RuntimeError);
  static py::exception<DivergenceError> divergence_error(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const UnsupportedError& e) {
      py::set_error(unsupported_error, e.what());
    } catch (const DivergenceError& e) {
      py::set_error(divergence_error, e.what());
    }
  });

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("truncation_radius", &QuadratureSpec::truncation_radius)
      .def_readwrite("truncation_tol", &QuadratureSpec::truncation_tol)
      .def_readwrite("sphere_resolution", &QuadratureSpec::sphere_resolution)
      .def_readwrite("outer_x_tolerance", &QuadratureSpec::outer_x_tolerance)
      .def_readwrite("h_bracket_grid", &QuadratureSpec::h_bracket_grid)
      .def_readwrite("h_max", &QuadratureSpec::h_max)
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
      .def_readwrite("max_intervals", &QuadratureSpec::max_intervals)
      .def_readwrite("seed", &QuadratureSpec::seed)
      .def("validate", &QuadratureSpec::validate);

  py::class_<ScalarField>(m, "ScalarField")
      .def_static("gaussian", [](int n, double sigma) { return ScalarField::gaussian(n, sigma); }, py::arg("dim"),
                  py::arg("sigma") = 1.0)
      .def_static("tent", &ScalarField::tent, py::arg("dim") = 1)
      .def_static("smooth_bump", &ScalarField::smooth_bump, py::arg("dim") = 1)
      .def_static("power_tail", &ScalarField::power_tail)
      .def_static("log_singular", &ScalarField::log_singular, py::arg("dim") = 1, py::arg("window") = 1.0)
      .def_static("sampled_table", &ScalarField::sampled_table, py::arg("x"), py::arg("u"))
      .def_static("constant", &ScalarField::constant, py::arg("dim"), py::arg("value"))
      .def("scaled", &ScalarField::scaled)
      .def("__call__", [](const ScalarField& u, const py::object& x) { return u(to_point(x)); })
      .def("gradient", [](const ScalarField& u, const py::object& x) { return from_point(u.gradient(to_point(x))); })
      .def_property_readonly("dimension", &ScalarField::dimension)
      .def_property_readonly("family", [](const ScalarField& u) { return std::string(u.family_name()); });

  py::class_<ExponentField>(m, "ExponentField")
      .def_static("constant", &ExponentField::constant, py::arg("dim"), py::arg("p"))
      .def_static("inverse_quadratic", &ExponentField::inverse_quadratic, py::arg("dim"), py::arg("a"), py::arg("b"))
      .def_static(
          "sin_squared",
          [](int n, double a, double b, const py::object& d) { return ExponentField::sin_squared(n, a, b, to_point(d)); },
          py::arg("dim"), py::arg("a"), py::arg("b"), py::arg("direction"))
      .def_static("piecewise_table", &ExponentField::piecewise_table, py::arg("knots"), py::arg("values"))
      .def("__call__", [](const ExponentField& p, const py::object& x) { return p(to_point(x)); })
      .def_property_readonly("dimension", &ExponentField::dimension)
      .def_property_readonly("p_minus", &ExponentField::p_minus)
      .def_property_readonly("p_plus", &ExponentField::p_plus)
      .def_property_readonly("p_infinity", &ExponentField::p_infinity)
      .def_property_readonly("family", [](const ExponentField& p) { return std::string(p.family_name()); });

  m.def("k_np", &k_np, py::arg("n"), py::arg("p"));
  m.def("abs_power_sphere_integral", py::overload_cast<int, double>(&abs_power_sphere_integral), py::arg("n"),
        py::arg("p"));

  m.def(
      "modular",
      [](const ScalarField& u, const ExponentField& p, double lambda, const std::string& part,
         const std::optional<QuadratureSpec>& q) {
        ModularOptions o;
        o.lambda = lambda;
        o.part = part_of(part);
        return modular(u, p, o, spec_or_default(q)).value;
      },
      py::arg("u"), py::arg("p"), py::arg("lam") = 1.0, py::arg("part") = "value", py::arg("quadrature") = py::none());

  m.def(
      "luxemburg_norm",
      [](const ScalarField& u, const ExponentField& p, const std::string& part,
         const std::optional<QuadratureSpec>& q) {
        const NormResult r = luxemburg_norm(u, p, {}, spec_or_default(q), part_of(part));
        py::dict d;
        d["norm"] = r.norm;
        d["modular_at_norm"] = r.modular_at_norm;
        d["iterations"] = r.iterations;
        d["node_count"] = r.node_count;
        return d;
      },
      py::arg("u"), py::arg("p"), py::arg("part") = "value", py::arg("quadrature") = py::none());

  m.def(
      "nguyen",
      [](const ScalarField& u, const ExponentField& p, double delta, const std::string& mode,
         const std::optional<QuadratureSpec>& q) {
        return functional_dict(nguyen_functional(u, p, delta, mode_of(mode), spec_or_default(q)));
      },
      py::arg("u"), py::arg("p"), py::arg("delta"), py::arg("mode") = "unit", py::arg("quadrature") = py::none());

  m.def(
      "eps",
      [](const ScalarField& u, const ExponentField& p, double eps, const std::string& mode,
         const std::optional<QuadratureSpec>& q) {
        return functional_dict(eps_functional(u, p, eps, eps_mode_of(mode), spec_or_default(q)));
      },
      py::arg("u"), py::arg("p"), py::arg("epsilon"), py::arg("mode") = "small_jump",
      py::arg("quadrature") = py::none());

  m.def(
      "bbm",
      [](const ScalarField& u, double p, double s, const std::optional<QuadratureSpec>& q) {
        return functional_dict(bbm_functional(u, p, s, spec_or_default(q)));
      },
      py::arg("u"), py::arg("p"), py::arg("s"), py::arg("quadrature") = py::none());

  m.def(
      "local_energy",
      [](const ScalarField& u, const ExponentField& p, const std::string& mode,
         const std::optional<QuadratureSpec>& q) {
        return local_energy(u, p, mode_of(mode), spec_or_default(q)).value;
      },
      py::arg("u"), py::arg("p"), py::arg("mode") = "unit", py::arg("quadrature") = py::none());

  m.def(
      "hl_maximal",
      [](const ScalarField& u, const py::object& x, double r_max, int depth) {
        return hl_maximal(u, to_point(x), r_max, depth);
      },
      py::arg("u"), py::arg("x"), py::arg("r_max") = 10.0, py::arg("depth") = 30);

  // Structured results travel as JSON text; the Python package decodes them.
  m.def(
      "_run_sweep",
      [](const std::string& kind, const ScalarField& u, const ExponentField& p, const std::vector<double>& grid,
         const std::optional<QuadratureSpec>& q) {
        const auto k = sweep_kind_from_string(kind);
        if (!k) throw py::value_error("unknown sweep kind '" + kind + "'");
        SweepReport r;
        {
          py::gil_scoped_release release;
          r = run_sweep(*k, u, p, grid, spec_or_default(q));
        }
        return to_json(r).dump();
      },
      py::arg("kind"), py::arg("u"), py::arg("p"), py::arg("grid"), py::arg("quadrature") = py::none());

  m.def("_run_scenario", [](const std::string& text) {
    json sc;
    try {
      sc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
    }
    ScenarioOutput out;
    {
      py::gil_scoped_release release;
      out = run_scenario(sc);
    }
    py::dict d;
    d["name"] = out.name;
    d["report"] = out.report.dump(2) + "\n";
    d["summary"] = out.summary;
    d["csv"] = out.csv ? py::cast(*out.csv) : py::none();
    d["plot"] = out.plot ? py::cast(*out.plot) : py::none();
    return d;
  });

  m.attr("SCHEMA") = kSchema;
}
