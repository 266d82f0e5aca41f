#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lxwdg/harness.hpp"

namespace py = pybind11;
using namespace lxwdg;

namespace {

RunConfig make_config(const std::map<std::string, std::string>& settings) {
  RunConfig config;
  for (const auto& [key, value] : settings) apply_setting(config, key, value);
  config.validate();
  return config;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const std::vector<StateVector>& rows) {
  const py::ssize_t n = static_cast<py::ssize_t>(rows.size());
  const py::ssize_t m = rows.empty() ? 0 : rows.front().size();
  py::array_t<double> out({n, m});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t r = 0; r < n; ++r)
    for (py::ssize_t k = 0; k < m; ++k) view(r, k) = rows[r](k);
  return out;
}

PrimitiveVector to_state(const std::vector<double>& v) {
  PrimitiveVector s(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) s(static_cast<int>(i)) = v[i];
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lax-Wendroff discontinuous Galerkin solver for 1D conservation laws";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<LimiterFailure>(m, "LimiterFailure", PyExc_ArithmeticError);

  m.def("gauss_legendre", [](int n) {
    const auto r = gauss_legendre(n);
    return py::make_tuple(to_array(r.nodes), to_array(r.weights));
  }, py::arg("n"));
  m.def("legendre_phi", [](double xi, int count) { return to_array(legendre_phi(xi, count)); },
        py::arg("xi"), py::arg("count"));
  m.def("default_cfl", &default_cfl, py::arg("order"));

  m.def("run", [](const std::map<std::string, std::string>& settings) {
    const auto config = make_config(settings);
    RunResult result = [&] {
      py::gil_scoped_release release;
      return run(config);
    }();
    const auto table = sample_solution(result.solution, config.points_per_element);
    py::dict out;
    out["summary"] = summary_json(config, result);
    out["x"] = to_array(table.x);
    out["q"] = to_array(table.q);
    return out;
  }, py::arg("settings"));

  m.def("convergence", [](const std::map<std::string, std::string>& settings) {
    const auto config = make_config(settings);
    ConvergenceReport report = [&] {
      py::gil_scoped_release release;
      return convergence(config);
    }();
    py::list rows;
    for (const auto& row : report.rows) {
      rows.append(py::make_tuple(row.order, row.n, row.error,
                                 row.rate ? py::object(py::float_(*row.rate)) : py::object(py::none())));
    }
    return rows;
  }, py::arg("settings"));

  m.def("riemann", [](const std::map<std::string, std::string>& settings) {
    const auto config = make_config(settings);
    RiemannReport report = [&] {
      py::gil_scoped_release release;
      return riemann_validate(config);
    }();
    py::dict out;
    out["summary"] = summary_json(config, report.run, {{"l1_error", report.l1_error}});
    out["l1_error"] = report.l1_error;
    out["x"] = to_array(report.numerical.x);
    out["q"] = to_array(report.numerical.q);
    out["exact"] = to_array(report.exact);
    return out;
  }, py::arg("settings"));

  m.def("riemann_exact", [](const std::string& equation, const std::vector<double>& left,
                            const std::vector<double>& right, const std::vector<double>& speeds,
                            double constant) {
    const Equation eq = parse_equation(equation);
    if (eq == Equation::burgers) throw ConfigError("equation: no exact Riemann solver for burgers");
    const auto rs = eq == Equation::euler ? RiemannSolution::euler(to_state(left), to_state(right), constant)
                                          : RiemannSolution::shallow_water(to_state(left), to_state(right), constant);
    std::vector<StateVector> rows;
    rows.reserve(speeds.size());
    for (double s : speeds) rows.push_back(rs.sample_primitive(s));
    return to_array(rows);
  }, py::arg("equation"), py::arg("left"), py::arg("right"), py::arg("speeds"), py::arg("constant"));
}
