#pragma once

// Random scenario and price generators shared by the unit and acceptance
// suites. Everything is seeded by the caller.

#include <cmath>
#include <random>

#include "ispgame/game.hpp"

namespace ispgame::testing {

inline constexpr ScenarioKind kAllKinds[] = {
    ScenarioKind::communal_linear, ScenarioKind::split_linear_bandwidth,
    ScenarioKind::split_linear_content, ScenarioKind::pwl_communal,
    ScenarioKind::smooth_communal, ScenarioKind::smooth_split,
    ScenarioKind::eyeball_transit,
};

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline SplitLinearDemand random_split_demand(std::mt19937& rng) {
  return {LinearDemand(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)),
          LinearDemand(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0))};
}

inline Scenario random_scenario(ScenarioKind kind, std::mt19937& rng) {
  const double ps = uniform(rng, -0.1, 0.1);
  switch (kind) {
    case ScenarioKind::communal_linear:
      return CommunalLinearGame{LinearDemand(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)), ps};
    case ScenarioKind::split_linear_bandwidth:
      return SplitLinearGame{random_split_demand(rng), Factoring::bandwidth, ps};
    case ScenarioKind::split_linear_content:
      return SplitLinearGame{random_split_demand(rng), Factoring::content, ps};
    case ScenarioKind::pwl_communal: {
      const double dmax = uniform(rng, 0.5, 1.5);
      return PwlCommunalGame{
          PwlConvexDemand(1.0, uniform(rng, 0.1, 0.9), dmax, dmax * uniform(rng, 0.1, 0.9)), ps};
    }
    case ScenarioKind::smooth_communal:
      return SmoothCommunalGame{
          SmoothConvexDemand(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 1.0, 4.0)),
          ps};
    case ScenarioKind::smooth_split:
      return SmoothSplitGame(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0),
                             uniform(rng, 1.0, 4.0), ps);
    case ScenarioKind::eyeball_transit: {
      const double p_max = uniform(rng, 0.5, 2.0);
      return EyeballTransitGame(uniform(rng, 0.5, 2.0), uniform(rng, 0.2, 1.0), p_max,
                                uniform(rng, 1.0, 3.0), uniform(rng, 0.1, 1.0),
                                uniform(rng, 0.1, 1.0), uniform(rng, 0.0, 0.3) * p_max);
    }
  }
  return CommunalLinearGame{LinearDemand(1.0, 1.0), 0.0};
}

// True when every utility is differentiable in a 1e-3 neighbourhood of p:
// positive prices, demand strictly positive, off the PWL threshold and away
// from a zero net transit flow.
inline bool away_from_kinks(const Scenario& s, const PricePoint& p) {
  constexpr double margin = 1e-3;
  if (p.p1 < margin || p.p2 < margin) return false;
  if (!demand_positive(s, {p.p1 + margin, p.p2 + margin})) return false;
  if (const auto* g = std::get_if<PwlCommunalGame>(&s)) {
    if (std::abs(p.sum() - g->demand.threshold_price()) < margin) return false;
  }
  if (const auto* g = std::get_if<EyeballTransitGame>(&s)) {
    if (std::abs(g->net_flow_to_a(p)) < margin) return false;
  }
  return true;
}

inline PricePoint random_point(const Scenario& s, std::mt19937& rng) {
  const double top = price_ceiling(s);
  return {uniform(rng, 0.0, top), uniform(rng, 0.0, top)};
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(std::abs(analytic), 1e-3);
}

// Central difference of player k's utility in its own price.
inline double own_price_difference(const Scenario& s, Player k, const PricePoint& p,
                                   double h = 1e-6) {
  const double x = p.own(k);
  return (utility(s, k, p.with_own(k, x + h)) - utility(s, k, p.with_own(k, x - h))) / (2.0 * h);
}

}  // namespace ispgame::testing
