#include "ispgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"
#include "ispgame/oracle.hpp"
#include "ispgame/scenario_io.hpp"

namespace ispgame {
namespace {

int sign_of(double x, double tolerance) {
  if (x > tolerance) return 1;
  if (x < -tolerance) return -1;
  return 0;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json candidate_json(const EyeballCandidate& c) {
  nlohmann::json j = {{"p_a", c.prices.p1},
                      {"p_b", c.prices.p2},
                      {"net_flow_to_a", c.net_flow_to_a},
                      {"case_holds", c.case_holds},
                      {"interior", c.interior}};
  if (c.transit_warning) j["warning"] = *c.transit_warning;
  return j;
}

nlohmann::json case_json(const TransitCase& c) {
  return {{"printed", candidate_json(c.printed)},
          {"derived", candidate_json(c.derived)},
          {"printed_bound", c.printed_bound},
          {"printed_bound_direction", "p_t/p_max < bound"},
          {"printed_bound_satisfied", c.printed_bound_satisfied},
          {"derived_bound", c.derived_bound},
          {"derived_bound_direction", "p_t/p_max > bound"},
          {"derived_bound_satisfied", c.derived_bound_satisfied},
          {"printed_requirement_met", c.printed_requirement}};
}

}  // namespace

bool printed_split_condition(double demand_ratio, double sensitivity_ratio) {
  const double twice = 2.0 * demand_ratio;
  return std::min(twice, 1.0) > sensitivity_ratio || std::max(twice, 1.0) < sensitivity_ratio;
}

nlohmann::json to_json(const ProfitabilityReport& r) {
  nlohmann::json j = {{"kind", std::string(to_string(r.kind))},
                      {"analytic_derivative", r.analytic_derivative},
                      {"numeric_derivative", r.numeric_derivative},
                      {"printed_condition", r.printed_condition},
                      {"printed_condition_verdict", r.printed_condition_verdict},
                      {"derived_condition_verdict", r.derived_condition_verdict},
                      {"consistent", r.consistent},
                      {"verdict", r.profitable ? "profitable" : "not profitable"}};
  if (r.cp_analytic_derivative) j["cp_analytic_derivative"] = *r.cp_analytic_derivative;
  if (r.cp_numeric_derivative) j["cp_numeric_derivative"] = *r.cp_numeric_derivative;
  if (r.cp_printed_verdict) j["cp_printed_verdict"] = *r.cp_printed_verdict;
  return j;
}

ProfitabilityReport profitability_report(const Scenario& family) {
  ProfitabilityReport r;
  r.kind = kind_of(family);
  if (r.kind == ScenarioKind::eyeball_transit) {
    throw ValidationError("profitability needs a side-payment scenario, not eyeball_transit");
  }
  const Equilibrium base = solve(with_side_payment(family, 0.0));
  if (!base.point()) {
    throw SolverFailure("no interior point equilibrium at p_s = 0: " +
                        (base.none() ? base.none()->reason : std::string("segment")));
  }

  if (const auto* g = std::get_if<SplitLinearGame>(&family)) {
    const double delta1 = g->demand.first_ratio();
    const double delta2 = g->demand.second_ratio();
    const double d1 = g->demand.first.sensitivity();
    const double d2 = g->demand.second.sensitivity();
    const double m1 = g->demand.first.max_demand();
    const double m2 = g->demand.second.max_demand();
    if (g->factoring == Factoring::bandwidth) {
      r.analytic_derivative = 2.0 * d1 / 9.0 * (1.0 - d1 / d2) * (2.0 * delta1 - delta2);
      r.printed_condition_verdict = printed_split_condition(m2 / m1, d2 / d1);
      r.printed_condition = "min{2 D_max_2/D_max_1, 1} > d_2/d_1 or max{2 D_max_2/D_max_1, 1} < d_2/d_1";
    } else {
      // Equilibrium p1* = delta_1 - p* = A and p2* - p_s = delta_2 - p* = B at
      // p_s = 0, with dp*/dp_s = (1 - kappa)/3.
      const double kappa = d2 / d1;
      const double a = (2.0 * delta1 - delta2) / 3.0;
      const double b = (2.0 * delta2 - delta1) / 3.0;
      r.analytic_derivative = -d1 * a * (2.0 + kappa) / 3.0 + d2 * b;
      r.cp_analytic_derivative = 2.0 * d2 / 9.0 * (kappa - 1.0) * (2.0 * delta2 - delta1);
      r.cp_numeric_derivative = numeric_profit_derivative(family, std::nullopt, Player::second);
      r.cp_printed_verdict = printed_split_condition(m1 / m2, d1 / d2);
      r.printed_condition_verdict = !*r.cp_printed_verdict;
      r.printed_condition =
          "not (min{2 D_max_1/D_max_2, 1} > d_1/d_2 or max{2 D_max_1/D_max_2, 1} < d_1/d_2)";
    }
  } else if (const auto* g = std::get_if<SmoothSplitGame>(&family)) {
    const double m1 = g->first().max_demand();
    const double m2 = g->second().max_demand();
    const double alpha = g->first().exponent();
    r.analytic_derivative = m1 * std::pow(alpha / (2.0 + alpha), alpha) * (m2 - m1) *
                            (1.0 + alpha) / (m2 * (2.0 + alpha));
    r.printed_condition_verdict = m2 > m1;
    r.printed_condition = "D_max_2 > D_max_1";
  } else {
    // Communal demand: p* and U1* do not move with p_s.
    r.analytic_derivative = 0.0;
    r.printed_condition_verdict = false;
    r.printed_condition = "communal demand: never profitable";
  }

  r.numeric_derivative = numeric_profit_derivative(family);
  r.derived_condition_verdict = r.analytic_derivative > kProfitTolerance;
  r.profitable = r.derived_condition_verdict;
  r.consistent = sign_of(r.analytic_derivative, kProfitTolerance) ==
                     sign_of(r.numeric_derivative, 1e-8) &&
                 r.printed_condition_verdict == r.derived_condition_verdict;
  return r;
}

nlohmann::json to_json(const TransitCaseReport& r) {
  return {{"delta", r.delta},
          {"phi", r.phi},
          {"p_t_over_p_max", r.transit_ratio},
          {"case_A", case_json(r.case_a)},
          {"case_B", case_json(r.case_b)},
          {"consistent_case", r.consistent_case},
          {"warnings", r.warnings}};
}

TransitCaseReport transit_case_report(const EyeballTransitGame& g) {
  TransitCaseReport r;
  r.delta = g.demand_factor();
  r.phi = g.caching_factor();
  r.transit_ratio = g.transit_price() / g.max_price();
  const double alpha = g.exponent();
  const double phi_a = g.miss_fraction_a();
  const double phi_b = g.miss_fraction_b();
  const double cap = 1.0 / (1.0 + alpha);

  auto fill = [&](TransitCase& c, bool case_a) {
    c.printed = case_a ? eyeball_case_a(g, FormulaMode::as_printed)
                       : eyeball_case_b(g, FormulaMode::as_printed);
    c.derived = case_a ? eyeball_case_a(g, FormulaMode::as_derived)
                       : eyeball_case_b(g, FormulaMode::as_derived);
    const double ratio = case_a ? r.phi / r.delta : r.delta / r.phi;
    const double head = 1.0 - std::pow(ratio, 1.0 / alpha);
    const double printed_scale = case_a ? phi_b * r.delta : phi_a / r.delta;
    const double derived_scale = case_a ? phi_a * r.delta : phi_b / r.delta;
    c.printed_bound = std::min(cap, head / printed_scale);
    c.printed_bound_satisfied = r.transit_ratio < c.printed_bound;
    c.derived_bound = head / derived_scale;
    c.derived_bound_satisfied = r.transit_ratio > c.derived_bound;
    c.printed_requirement = case_a ? r.phi < r.delta : r.phi > r.delta;
  };
  fill(r.case_a, true);
  fill(r.case_b, false);

  const bool ok_a = r.case_a.derived.case_holds && r.case_a.derived.interior;
  const bool ok_b = r.case_b.derived.case_holds && r.case_b.derived.interior;
  if (ok_a && ok_b) {
    r.consistent_case = "both";
  } else if (ok_a) {
    r.consistent_case = "A";
  } else if (ok_b) {
    r.consistent_case = "B";
  } else if (r.case_a.derived.net_flow_to_a == 0.0 && r.case_b.derived.net_flow_to_a == 0.0) {
    r.consistent_case = "balanced";
  } else {
    r.consistent_case = "none";
  }

  if (!(r.delta < 1.0)) r.warnings.push_back("delta >= 1");
  if (r.case_a.derived.transit_warning) r.warnings.push_back(*r.case_a.derived.transit_warning);
  if (r.case_b.derived.transit_warning) r.warnings.push_back(*r.case_b.derived.transit_warning);
  if (g.transit_price() == 0.0) r.warnings.push_back("p_t = 0: transit carries no revenue");
  return r;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::string& parameter, double from,
                            double to, double step, FormulaMode mode) {
  ParamMap params = scenario_params(base);
  if (!params.count(parameter)) {
    throw ValidationError("unknown sweep parameter '" + parameter + "' for kind " +
                          std::string(to_string(kind_of(base))));
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("sweep step must be > 0");
  if (!(to >= from) || !std::isfinite(from) || !std::isfinite(to)) {
    throw ValidationError("sweep requires finite from <= to");
  }
  const double count = std::floor((to - from) / step + 1e-9) + 1.0;
  if (count > 1e6) throw ValidationError("sweep resource guard: more than 1e6 rows");

  const ScenarioKind kind = kind_of(base);
  std::vector<SweepRow> rows;
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    SweepRow row;
    row.value = from + static_cast<double>(i) * step;
    params[parameter] = row.value;
    try {
      const Scenario s = make_scenario(kind, params);
      const Equilibrium eq = solve(s, mode);
      if (const auto* p = eq.point()) {
        const Payoffs u = utilities(s, p->prices);
        row = {row.value, "point", p->prices.p1, p->prices.p2, u.first, u.second, p->case_label};
      } else if (const auto* seg = eq.segment()) {
        const PricePoint mid = seg->at(0.5 * (seg->p1_lower + seg->p1_upper));
        const Payoffs u = utilities(s, mid);
        row = {row.value, "segment", mid.p1, mid.p2, u.first, u.second, seg->case_label};
      } else {
        row.type = "none";
        row.detail = eq.none()->reason;
      }
    } catch (const ValidationError& e) {
      row.type = "none";
      row.detail = std::string("invalid parameters: ") + e.what();
    } catch (const SolverFailure& e) {
      row.type = "none";
      row.detail = std::string("solver failure: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::string& parameter,
                     const std::vector<SweepRow>& rows) {
  os << parameter << ",p1,p2,U1,U2,type,detail\n";
  for (const auto& r : rows) {
    os << fmt12(r.value) << ',';
    if (r.type == "none") {
      os << ",,,,";
    } else {
      os << fmt12(r.p1) << ',' << fmt12(r.p2) << ',' << fmt12(r.u1) << ',' << fmt12(r.u2) << ',';
    }
    os << r.type << ',' << csv_quote(r.detail) << '\n';
  }
}

}  // namespace ispgame
