#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ispgame/analysis.hpp"
#include "ispgame/cli.hpp"
#include "ispgame/demand.hpp"
#include "ispgame/dynamics.hpp"
#include "ispgame/equilibrium.hpp"
#include "ispgame/errors.hpp"
#include "ispgame/oracle.hpp"
#include "ispgame/scenario_io.hpp"

namespace py = pybind11;
using namespace ispgame;

// Scenarios and reports cross the boundary as JSON text; the Python side
// wraps these with json.loads / json.dumps.
namespace {

Scenario parse(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

using Row5 = std::tuple<double, double, double, double, double>;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pricing games between ISPs and content providers";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  m.def("solve", [](const std::string& scenario, const std::string& mode) {
    return to_json(solve(parse(scenario), parse_formula_mode(mode))).dump();
  }, py::arg("scenario"), py::arg("mode") = "derived");

  m.def("verify", [](const std::string& scenario, double p1, double p2,
                     std::optional<double> grid_step, std::optional<double> eps) {
    return to_json(verify_nep(parse(scenario), {p1, p2}, {grid_step, eps})).dump();
  }, py::arg("scenario"), py::arg("p1"), py::arg("p2"), py::arg("grid_step") = py::none(),
     py::arg("eps") = py::none());

  m.def("oracle", [](const std::string& scenario, std::optional<double> grid_step,
                     std::optional<double> eps) {
    const Scenario s = parse(scenario);
    return to_json(find_grid_neps(s, default_grid(s, grid_step), eps)).dump();
  }, py::arg("scenario"), py::arg("grid_step") = py::none(), py::arg("eps") = py::none());

  m.def("profit", [](const std::string& scenario) {
    return to_json(profitability_report(parse(scenario))).dump();
  }, py::arg("scenario"));

  m.def("transit", [](const std::string& scenario) {
    const Scenario s = parse(scenario);
    const auto* g = std::get_if<EyeballTransitGame>(&s);
    if (!g) throw ValidationError("transit needs an eyeball_transit scenario");
    return to_json(transit_case_report(*g)).dump();
  }, py::arg("scenario"));

  m.def("utilities", [](const std::string& scenario, double p1, double p2) {
    const Payoffs u = utilities(parse(scenario), {p1, p2});
    return std::make_pair(u.first, u.second);
  }, py::arg("scenario"), py::arg("p1"), py::arg("p2"));

  m.def("integrate", [](const std::string& scenario, double p1, double p2,
                        const std::string& mode, double dt, double t_max) {
    const Trajectory t = integrate(parse(scenario), {p1, p2}, parse_dynamics_mode(mode), dt, t_max);
    std::vector<Row5> rows;
    for (std::size_t i = 0; i < t.times.size(); ++i) {
      rows.emplace_back(t.times[i], t.points[i].p1, t.points[i].p2, t.payoffs[i].first,
                        t.payoffs[i].second);
    }
    return rows;
  }, py::arg("scenario"), py::arg("p1"), py::arg("p2"), py::arg("mode"), py::arg("dt"),
     py::arg("t_max"));

  m.def("field", [](const std::string& scenario, double lo, double hi, std::size_t res) {
    const VectorField f = sample_field(parse(scenario), lo, hi, res);
    std::vector<std::tuple<double, double, double, double>> rows;
    for (const auto& n : f.nodes) {
      rows.emplace_back(n.at.p1, n.at.p2, n.gradient.first.right, n.gradient.second.right);
    }
    return rows;
  }, py::arg("scenario"), py::arg("lo"), py::arg("hi"), py::arg("res"));

  m.def("sweep", [](const std::string& scenario, const std::string& param, double from,
                    double to, double step, const std::string& mode) {
    std::ostringstream os;
    write_sweep_csv(os, param, sweep(parse(scenario), param, from, to, step,
                                     parse_formula_mode(mode)));
    return os.str();
  }, py::arg("scenario"), py::arg("param"), py::arg("start"), py::arg("stop"), py::arg("step"),
     py::arg("mode") = "derived");

  m.def("calibrate_smooth", [](double d_max, double d_theta, double s_max, double s_theta) {
    const SmoothConvexDemand fit = calibrate_smooth(d_max, d_theta, s_max, s_theta);
    return std::make_pair(fit.exponent(), fit.max_price());
  }, py::arg("D_max"), py::arg("D_theta"), py::arg("d_max"), py::arg("d_theta"));

  m.def("reproduce", [](const std::string& target) {
    std::ostringstream os;
    const int code = reproduce(target, os);
    return std::make_pair(code == kExitOk, os.str());
  }, py::arg("target"));
}
