#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ispgame/game.hpp"

namespace ispgame {

// Which closed forms to use where the printed formulas and a re-derivation
// from the stated utilities disagree (PWL case analysis, eyeball FOCs).
// Scenario kinds without a discrepancy ignore it.
enum class FormulaMode { as_printed, as_derived };

FormulaMode parse_formula_mode(std::string_view name);
std::string_view to_string(FormulaMode mode);

struct PointEquilibrium {
  PricePoint prices;
  std::string case_label;

  double price_sum() const { return prices.sum(); }
};

// Continuum of equilibria p1 + p2 = price_sum with p1 in the OPEN interval
// (p1_lower, p1_upper).
struct SegmentEquilibrium {
  double price_sum = 0.0;
  double p1_lower = 0.0;
  double p1_upper = 0.0;
  std::string case_label;

  bool contains(double p1) const { return p1_lower < p1 && p1 < p1_upper; }
  PricePoint at(double p1) const { return {p1, price_sum - p1}; }
};

struct NoEquilibrium {
  std::string reason;
};

struct Equilibrium {
  std::variant<PointEquilibrium, SegmentEquilibrium, NoEquilibrium> value;
  // Further consistent interior points when the game has several.
  std::vector<PointEquilibrium> alternatives;
  std::vector<std::string> warnings;

  const PointEquilibrium* point() const { return std::get_if<PointEquilibrium>(&value); }
  const SegmentEquilibrium* segment() const {
    return std::get_if<SegmentEquilibrium>(&value);
  }
  const NoEquilibrium* none() const { return std::get_if<NoEquilibrium>(&value); }
};

nlohmann::json to_json(const Equilibrium& eq);

Equilibrium solve_communal_linear(const CommunalLinearGame& g);
Equilibrium solve_split_linear(const SplitLinearGame& g);
Equilibrium solve_pwl_communal(const PwlCommunalGame& g,
                               FormulaMode mode = FormulaMode::as_derived);
Equilibrium solve_smooth(const SmoothCommunalGame& g);
Equilibrium solve_smooth(const SmoothSplitGame& g);
Equilibrium solve_eyeball(const EyeballTransitGame& g,
                          FormulaMode mode = FormulaMode::as_derived);

Equilibrium solve(const Scenario& s, FormulaMode mode = FormulaMode::as_derived);

// Root of 2D(p) + p D'(p) = 0 on (0, p_max), found by bracketing.
double smooth_price_sum_root(const SmoothConvexDemand& demand);

// Printed FOC coefficients for the eyeball game, kept alongside the derived
// ones so the two can be compared.
struct EyeballCandidate {
  PricePoint prices;
  double net_flow_to_a = 0.0;  // Phi_b D_a(p_b) - Phi_a D_b(p_a)
  bool case_holds = false;     // strict case inequality at the candidate
  bool interior = false;
  std::optional<std::string> transit_warning;  // p_t >= min{p_a, p_b}
};

// Case A: flow priced to ISP a. Case B: flow priced to ISP b.
EyeballCandidate eyeball_case_a(const EyeballTransitGame& g, FormulaMode mode);
EyeballCandidate eyeball_case_b(const EyeballTransitGame& g, FormulaMode mode);

struct VerifyOptions {
  std::optional<double> grid_step;  // default 1e-3 * price ceiling
  std::optional<double> epsilon;    // default 1e-6 * max |U| over the grid
};

struct VerificationReport {
  PricePoint candidate;
  Payoffs payoffs;
  Gradient gradient;  // one-sided FOC residuals
  double gain_first = 0.0;
  double gain_second = 0.0;
  PricePoint best_deviation;  // per-player best grid deviation (p1 from 1, p2 from 2)
  double grid_step = 0.0;
  double price_ceiling = 0.0;
  double epsilon = 0.0;
  // FOC residual |dU| <= 1e-9 or one-sided bracketing left >= 0 >= right,
  // for both players.
  bool stationary = false;
  bool passed = false;
};

nlohmann::json to_json(const VerificationReport& r);

VerificationReport verify_nep(const Scenario& s, const PricePoint& candidate,
                              const VerifyOptions& options = {});

}  // namespace ispgame
