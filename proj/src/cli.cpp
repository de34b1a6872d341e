#include "ispgame/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ispgame/analysis.hpp"
#include "ispgame/dynamics.hpp"
#include "ispgame/equilibrium.hpp"
#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"
#include "ispgame/oracle.hpp"
#include "ispgame/scenario_io.hpp"

namespace ispgame {
namespace {

// Output sink for --out: a file when given, the caller's stream otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

PricePoint point_from_solution(const std::string& path, double sample) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open solution file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
  auto number = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
      throw ValidationError(path + ": /" + key + " missing or not a number");
    }
    return doc[key].get<double>();
  };
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    throw ValidationError(path + ": /type missing");
  }
  const std::string type = doc["type"].get<std::string>();
  if (type == "point") return {number("p1"), number("p2")};
  if (type == "segment") {
    if (!(sample > 0.0 && sample < 1.0)) throw ValidationError("--sample must lie in (0, 1)");
    const double lo = number("p1_lo");
    const double p1 = lo + sample * (number("p1_hi") - lo);
    return {p1, number("p_sum") - p1};
  }
  if (type == "none") throw SolverFailure(path + ": solution has no equilibrium to verify");
  throw ValidationError(path + ": /type must be point, segment or none");
}

struct Options {
  std::string file;
  std::string mode = "derived";
  std::string out;
  std::optional<double> p1, p2, grid_step, eps;
  std::string from_solution;
  double sample = 0.5;
  std::size_t min_run = 10;
  std::vector<double> init, box;
  std::string dyn_mode;
  double dt = 0.0, t_max = 0.0;
  std::size_t res = 0;
  std::string param;
  double from = 0.0, to = 0.0, step = 0.0;
  std::string target;
};

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load_scenario(o.file);
  const Equilibrium eq = solve(s, parse_formula_mode(o.mode));
  Sink sink(o.out, out);
  sink.get() << dump_json(to_json(eq));
  if (eq.none()) {
    err << "no interior equilibrium: " << eq.none()->reason << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  PricePoint candidate;
  if (!o.from_solution.empty()) {
    if (o.p1 || o.p2) throw ValidationError("give either --p1/--p2 or --from-solution");
    candidate = point_from_solution(o.from_solution, o.sample);
  } else {
    if (!o.p1 || !o.p2) throw ValidationError("verify needs --p1 and --p2 (or --from-solution)");
    candidate = {*o.p1, *o.p2};
  }
  if (o.grid_step && !(*o.grid_step > 0.0)) throw ValidationError("--grid-step must be > 0");
  if (o.eps && !(*o.eps > 0.0)) throw ValidationError("--eps must be > 0");
  const VerificationReport r = verify_nep(s, candidate, {o.grid_step, o.eps});
  Sink sink(o.out, out);
  sink.get() << dump_json(to_json(r));
  return r.passed ? kExitOk : kExitSolver;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load_scenario(o.file);
  if (o.eps && !(*o.eps > 0.0)) throw ValidationError("--eps must be > 0");
  const GridNepResult r = find_grid_neps(s, default_grid(s, o.grid_step), o.eps, o.min_run);
  Sink sink(o.out, out);
  sink.get() << dump_json(to_json(r));
  if (r.points.empty() && r.segments.empty()) {
    err << "no interior eps-equilibrium on the grid\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_profit(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  Sink sink(o.out, out);
  sink.get() << dump_json(to_json(profitability_report(s)));
  return kExitOk;
}

int cmd_transit(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  const auto* g = std::get_if<EyeballTransitGame>(&s);
  if (!g) throw ValidationError("transit needs an eyeball_transit scenario");
  Sink sink(o.out, out);
  sink.get() << dump_json(to_json(transit_case_report(*g)));
  return kExitOk;
}

int cmd_dynamics(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  const Trajectory t = integrate(s, {o.init[0], o.init[1]}, parse_dynamics_mode(o.dyn_mode),
                                 o.dt, o.t_max);
  Sink sink(o.out, out);
  write_trajectory_csv(sink.get(), t);
  return kExitOk;
}

int cmd_field(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  const VectorField f = sample_field(s, o.box[0], o.box[1], o.res);
  Sink sink(o.out, out);
  write_field_csv(sink.get(), f);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario s = load_scenario(o.file);
  const auto rows = sweep(s, o.param, o.from, o.to, o.step, parse_formula_mode(o.mode));
  Sink sink(o.out, out);
  write_sweep_csv(sink.get(), o.param, rows);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pricing games between ISPs and content providers"};
  app.name("ispgame");
  app.require_subcommand(1, 1);
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "Closed-form or numerical equilibrium");
  solve_cmd->add_option("file", o.file, "Scenario JSON")->required();
  solve_cmd->add_option("--mode", o.mode, "printed or derived formulas")
      ->check(CLI::IsMember({"printed", "derived"}));
  solve_cmd->add_option("--out", o.out, "Write to this file instead of stdout");

  auto* verify_cmd = app.add_subcommand("verify", "Grid deviation check of a candidate");
  verify_cmd->add_option("file", o.file, "Scenario JSON")->required();
  verify_cmd->add_option("--p1", o.p1);
  verify_cmd->add_option("--p2", o.p2);
  verify_cmd->add_option("--from-solution", o.from_solution, "Equilibrium JSON from solve");
  verify_cmd->add_option("--sample", o.sample, "Position inside a segment, in (0, 1)");
  verify_cmd->add_option("--grid-step", o.grid_step);
  verify_cmd->add_option("--eps", o.eps);
  verify_cmd->add_option("--out", o.out);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive eps-equilibrium grid search");
  oracle_cmd->add_option("file", o.file, "Scenario JSON")->required();
  oracle_cmd->add_option("--grid-step", o.grid_step);
  oracle_cmd->add_option("--eps", o.eps);
  oracle_cmd->add_option("--min-run", o.min_run, "Cluster length reported as a segment")
      ->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--out", o.out);

  auto* profit_cmd = app.add_subcommand("profit", "Side-payment profitability report");
  profit_cmd->add_option("file", o.file, "Scenario JSON")->required();
  profit_cmd->add_option("--out", o.out);

  auto* transit_cmd = app.add_subcommand("transit", "Case report for the transit game");
  transit_cmd->add_option("file", o.file, "Scenario JSON")->required();
  transit_cmd->add_option("--out", o.out);

  auto* dyn_cmd = app.add_subcommand("dynamics", "Euler-integrated price dynamics (CSV)");
  dyn_cmd->add_option("file", o.file, "Scenario JSON")->required();
  dyn_cmd->add_option("--init", o.init, "P1,P2")->delimiter(',')->expected(2)->required();
  dyn_cmd->add_option("--mode", o.dyn_mode, "printed, gradient or best_response_relaxation")
      ->required();
  dyn_cmd->add_option("--dt", o.dt)->required();
  dyn_cmd->add_option("--t-max", o.t_max)->required();
  dyn_cmd->add_option("--out", o.out);

  auto* field_cmd = app.add_subcommand("field", "Own-price gradient field (CSV)");
  field_cmd->add_option("file", o.file, "Scenario JSON")->required();
  field_cmd->add_option("--box", o.box, "LO,HI")->delimiter(',')->expected(2)->required();
  field_cmd->add_option("--res", o.res, "Nodes per axis")->required();
  field_cmd->add_option("--out", o.out);

  auto* sweep_cmd = app.add_subcommand("sweep", "Re-solve over a parameter range (CSV)");
  sweep_cmd->add_option("file", o.file, "Scenario JSON")->required();
  sweep_cmd->add_option("--param", o.param)->required();
  sweep_cmd->add_option("--from", o.from)->required();
  sweep_cmd->add_option("--to", o.to)->required();
  sweep_cmd->add_option("--step", o.step)->required();
  sweep_cmd->add_option("--mode", o.mode)->check(CLI::IsMember({"printed", "derived"}));
  sweep_cmd->add_option("--out", o.out);

  auto* repro_cmd = app.add_subcommand("reproduce", "Expected-vs-computed table for an example");
  repro_cmd->add_option("target", o.target, "thm1, pwl1, pwl2, pwl3, smooth or transit")
      ->required()
      ->check(CLI::IsMember({"thm1", "pwl1", "pwl2", "pwl3", "smooth", "transit"}));

  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    const auto subs = app.get_subcommands([](CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(),
                                   [&](CLI::App* sub) { return sub->get_name() == args[0]; });
    if (!known) {
      err << "error: unknown subcommand '" << args[0] << "'\n";
      return kExitValidation;
    }
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*solve_cmd) return cmd_solve(o, out, err);
    if (*verify_cmd) return cmd_verify(o, out, err);
    if (*oracle_cmd) return cmd_oracle(o, out, err);
    if (*profit_cmd) return cmd_profit(o, out, err);
    if (*transit_cmd) return cmd_transit(o, out, err);
    if (*dyn_cmd) return cmd_dynamics(o, out, err);
    if (*field_cmd) return cmd_field(o, out, err);
    if (*sweep_cmd) return cmd_sweep(o, out, err);
    if (*repro_cmd) return reproduce(o.target, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitValidation;
}

}  // namespace ispgame
