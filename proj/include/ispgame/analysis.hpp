#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ispgame/equilibrium.hpp"
#include "ispgame/game.hpp"

namespace ispgame {

// Strict positivity threshold for "profitable".
inline constexpr double kProfitTolerance = 1e-9;

struct ProfitabilityReport {
  ScenarioKind kind;
  double analytic_derivative = 0.0;  // dU1*/dp_s at p_s = 0
  double numeric_derivative = 0.0;
  bool printed_condition_verdict = false;
  bool derived_condition_verdict = false;
  bool consistent = false;
  bool profitable = false;  // == derived_condition_verdict

  // Content factoring only: the CP side, which the printed swapped condition
  // speaks about.
  std::optional<double> cp_analytic_derivative;
  std::optional<double> cp_numeric_derivative;
  std::optional<bool> cp_printed_verdict;

  std::string printed_condition;  // human-readable form of the tested inequality
};

nlohmann::json to_json(const ProfitabilityReport& r);

ProfitabilityReport profitability_report(const Scenario& family);

// Printed split-demand test: min{2r, 1} > q or max{2r, 1} < q.
bool printed_split_condition(double demand_ratio, double sensitivity_ratio);

struct TransitCase {
  EyeballCandidate printed;
  EyeballCandidate derived;
  // Printed bound on p_t / p_max (an upper bound) and whether it holds.
  double printed_bound = 0.0;
  bool printed_bound_satisfied = false;
  // Bound re-derived from the case inequality: p_t / p_max > derived_bound.
  double derived_bound = 0.0;
  bool derived_bound_satisfied = false;
  // phi < delta for case A, phi > delta for case B.
  bool printed_requirement = false;
};

struct TransitCaseReport {
  double delta = 0.0;
  double phi = 0.0;
  double transit_ratio = 0.0;  // p_t / p_max
  TransitCase case_a;
  TransitCase case_b;
  std::string consistent_case;  // "A", "B", "both", "none" or "balanced"
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const TransitCaseReport& r);

TransitCaseReport transit_case_report(const EyeballTransitGame& g);

struct SweepRow {
  double value = 0.0;
  std::string type;  // point | segment | none
  double p1 = 0.0;   // segment rows: interval midpoint
  double p2 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  std::string detail;  // case label or reason
};

std::vector<SweepRow> sweep(const Scenario& base, const std::string& parameter,
                            double from, double to, double step,
                            FormulaMode mode = FormulaMode::as_derived);

// parameter,type,p1,p2,U1,U2,detail ; none rows leave the numeric cells empty.
void write_sweep_csv(std::ostream& os, const std::string& parameter,
                     const std::vector<SweepRow>& rows);

}  // namespace ispgame
