#include "ispgame/game.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"

namespace ispgame {
namespace {

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 7> kKindNames{{
    {ScenarioKind::communal_linear, "communal_linear"},
    {ScenarioKind::split_linear_bandwidth, "split_linear_bandwidth"},
    {ScenarioKind::split_linear_content, "split_linear_content"},
    {ScenarioKind::pwl_communal, "pwl_communal"},
    {ScenarioKind::smooth_communal, "smooth_communal"},
    {ScenarioKind::smooth_split, "smooth_split"},
    {ScenarioKind::eyeball_transit, "eyeball_transit"},
}};

void require_prices(const PricePoint& p) {
  if (!(p.p1 >= 0.0) || !(p.p2 >= 0.0) || !std::isfinite(p.p1) || !std::isfinite(p.p2)) {
    throw ValidationError("prices must be finite and >= 0, got (" + fmt12(p.p1) + ", " +
                          fmt12(p.p2) + ")");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

// d/dx of g(x) * D(x + c) where g is affine with slope g_slope and value
// g_value at x; both sides.
Slope product_rule(double demand, const Slope& demand_slope, double g_value,
                   double g_slope) {
  return {g_slope * demand + g_value * demand_slope.left,
          g_slope * demand + g_value * demand_slope.right};
}

Slope scale(const Slope& s, double k) {
  return {k * s.left, k * s.right};
}

Slope add(const Slope& a, const Slope& b) { return {a.left + b.left, a.right + b.right}; }

// One-sided derivative of max{x(q), 0} at a point where x = value and x has
// one-sided derivatives dx.
Slope positive_part(double value, const Slope& dx) {
  if (value > 0.0) return dx;
  if (value < 0.0) return {0.0, 0.0};
  return {std::min(dx.left, 0.0), std::max(dx.right, 0.0)};
}

template <class Demand>
Payoffs communal_payoffs(const Demand& demand, double ps, const PricePoint& p) {
  const double d = demand.value(p.sum());
  return {(p.p1 + ps) * d, (p.p2 - ps) * d};
}

template <class Demand>
Gradient communal_gradient(const Demand& demand, double ps, const PricePoint& p) {
  const double d = demand.value(p.sum());
  const Slope s = demand.slope(p.sum());
  return {product_rule(d, s, p.p1 + ps, 1.0), product_rule(d, s, p.p2 - ps, 1.0)};
}

struct PayoffVisitor {
  const PricePoint& p;

  Payoffs operator()(const CommunalLinearGame& g) const {
    return communal_payoffs(g.demand, g.side_payment, p);
  }
  Payoffs operator()(const PwlCommunalGame& g) const {
    return communal_payoffs(g.demand, g.side_payment, p);
  }
  Payoffs operator()(const SmoothCommunalGame& g) const {
    return communal_payoffs(g.demand, g.side_payment, p);
  }
  Payoffs operator()(const SplitLinearGame& g) const {
    const double d1 = g.demand.first.value(p.sum());
    const double d2 = g.demand.second.value(p.sum());
    const double ps = g.side_payment;
    if (g.factoring == Factoring::bandwidth) {
      return {(p.p1 + ps) * d1, p.p2 * d2 - ps * d1};
    }
    return {p.p1 * d1 + ps * d2, (p.p2 - ps) * d2};
  }
  Payoffs operator()(const SmoothSplitGame& g) const {
    const double d1 = g.first().value(p.sum());
    const double d2 = g.second().value(p.sum());
    const double ps = g.side_payment();
    return {d1 * (p.p1 + ps), d2 * p.p2 - d1 * ps};
  }
  Payoffs operator()(const EyeballTransitGame& g) const {
    const double pa = p.p1;
    const double pb = p.p2;
    const double flow = g.net_flow_to_a(p);
    const double pt = g.transit_price();
    return {g.demand_a().value(pa) * pa + std::max(flow, 0.0) * pt,
            g.demand_b().value(pb) * pb + std::max(-flow, 0.0) * pt};
  }
};

struct GradientVisitor {
  const PricePoint& p;

  Gradient operator()(const CommunalLinearGame& g) const {
    return communal_gradient(g.demand, g.side_payment, p);
  }
  Gradient operator()(const PwlCommunalGame& g) const {
    return communal_gradient(g.demand, g.side_payment, p);
  }
  Gradient operator()(const SmoothCommunalGame& g) const {
    return communal_gradient(g.demand, g.side_payment, p);
  }
  Gradient operator()(const SplitLinearGame& g) const {
    const double q = p.sum();
    const double d1 = g.demand.first.value(q);
    const double d2 = g.demand.second.value(q);
    const Slope s1 = g.demand.first.slope(q);
    const Slope s2 = g.demand.second.slope(q);
    const double ps = g.side_payment;
    if (g.factoring == Factoring::bandwidth) {
      return {product_rule(d1, s1, p.p1 + ps, 1.0),
              add(product_rule(d2, s2, p.p2, 1.0), scale(s1, -ps))};
    }
    return {add(product_rule(d1, s1, p.p1, 1.0), scale(s2, ps)),
            product_rule(d2, s2, p.p2 - ps, 1.0)};
  }
  Gradient operator()(const SmoothSplitGame& g) const {
    const double q = p.sum();
    const double d1 = g.first().value(q);
    const double d2 = g.second().value(q);
    const Slope s1 = g.first().slope(q);
    const Slope s2 = g.second().slope(q);
    const double ps = g.side_payment();
    return {product_rule(d1, s1, p.p1 + ps, 1.0),
            add(product_rule(d2, s2, p.p2, 1.0), scale(s1, -ps))};
  }
  Gradient operator()(const EyeballTransitGame& g) const {
    const double pa = p.p1;
    const double pb = p.p2;
    const double pt = g.transit_price();
    const double flow = g.net_flow_to_a(p);
    // d flow / d p_a = -Phi_a D_b'(p_a);  d(-flow) / d p_b = -Phi_b D_a'(p_b)
    const Slope dflow_a = scale(g.demand_b().slope(pa), -g.miss_fraction_a());
    const Slope dflow_b = scale(g.demand_a().slope(pb), -g.miss_fraction_b());
    const Slope own_a = product_rule(g.demand_a().value(pa), g.demand_a().slope(pa), pa, 1.0);
    const Slope own_b = product_rule(g.demand_b().value(pb), g.demand_b().slope(pb), pb, 1.0);
    return {add(own_a, scale(positive_part(flow, dflow_a), pt)),
            add(own_b, scale(positive_part(-flow, dflow_b), pt))};
  }
};

struct CeilingVisitor {
  double operator()(const CommunalLinearGame& g) const { return g.demand.zero_price(); }
  double operator()(const PwlCommunalGame& g) const { return g.demand.max_price(); }
  double operator()(const SmoothCommunalGame& g) const { return g.demand.max_price(); }
  double operator()(const SplitLinearGame& g) const {
    return std::max(g.demand.first_ratio(), g.demand.second_ratio());
  }
  double operator()(const SmoothSplitGame& g) const { return g.first().max_price(); }
  double operator()(const EyeballTransitGame& g) const { return g.max_price(); }
};

struct DemandPositiveVisitor {
  const PricePoint& p;

  bool operator()(const CommunalLinearGame& g) const { return g.demand.value(p.sum()) > 0.0; }
  bool operator()(const PwlCommunalGame& g) const { return g.demand.value(p.sum()) > 0.0; }
  bool operator()(const SmoothCommunalGame& g) const { return g.demand.value(p.sum()) > 0.0; }
  bool operator()(const SplitLinearGame& g) const {
    return g.demand.first.value(p.sum()) > 0.0 && g.demand.second.value(p.sum()) > 0.0;
  }
  bool operator()(const SmoothSplitGame& g) const {
    return g.first().value(p.sum()) > 0.0 && g.second().value(p.sum()) > 0.0;
  }
  bool operator()(const EyeballTransitGame& g) const {
    return g.demand_a().value(p.p1) > 0.0 && g.demand_b().value(p.p2) > 0.0;
  }
};

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ValidationError("unknown scenario kind '" + std::string(name) + "'");
}

SmoothSplitGame::SmoothSplitGame(double first_max_demand, double second_max_demand,
                                 double max_price, double exponent, double side_payment)
    : first_(first_max_demand, max_price, exponent),
      second_(second_max_demand, max_price, exponent),
      side_payment_(side_payment) {
  require_finite(side_payment, "p_s");
}

EyeballTransitGame::EyeballTransitGame(double max_demand_a, double max_demand_b,
                                       double max_price, double exponent,
                                       double miss_fraction_a, double miss_fraction_b,
                                       double transit_price)
    : demand_a_(max_demand_a, max_price, exponent),
      demand_b_(max_demand_b, max_price, exponent),
      miss_fraction_a_(miss_fraction_a),
      miss_fraction_b_(miss_fraction_b),
      transit_price_(transit_price) {
  for (auto [v, name] : {std::pair{miss_fraction_a, "Phi_a"}, std::pair{miss_fraction_b, "Phi_b"}}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw ValidationError(std::string(name) + " must lie in (0, 1], got " + fmt12(v));
    }
  }
  if (!(transit_price >= 0.0) || !std::isfinite(transit_price)) {
    throw ValidationError("p_t must be finite and >= 0, got " + fmt12(transit_price));
  }
}

double EyeballTransitGame::demand_factor() const {
  return demand_b_.max_demand() / demand_a_.max_demand();
}

double EyeballTransitGame::net_flow_to_a(const PricePoint& p) const {
  return miss_fraction_b_ * demand_a_.value(p.p2) - miss_fraction_a_ * demand_b_.value(p.p1);
}

ScenarioKind kind_of(const Scenario& s) {
  struct Visitor {
    ScenarioKind operator()(const CommunalLinearGame&) const { return ScenarioKind::communal_linear; }
    ScenarioKind operator()(const SplitLinearGame& g) const {
      return g.factoring == Factoring::bandwidth ? ScenarioKind::split_linear_bandwidth
                                                 : ScenarioKind::split_linear_content;
    }
    ScenarioKind operator()(const PwlCommunalGame&) const { return ScenarioKind::pwl_communal; }
    ScenarioKind operator()(const SmoothCommunalGame&) const { return ScenarioKind::smooth_communal; }
    ScenarioKind operator()(const SmoothSplitGame&) const { return ScenarioKind::smooth_split; }
    ScenarioKind operator()(const EyeballTransitGame&) const { return ScenarioKind::eyeball_transit; }
  };
  return std::visit(Visitor{}, s);
}

double side_payment_of(const Scenario& s) {
  struct Visitor {
    double operator()(const CommunalLinearGame& g) const { return g.side_payment; }
    double operator()(const SplitLinearGame& g) const { return g.side_payment; }
    double operator()(const PwlCommunalGame& g) const { return g.side_payment; }
    double operator()(const SmoothCommunalGame& g) const { return g.side_payment; }
    double operator()(const SmoothSplitGame& g) const { return g.side_payment(); }
    double operator()(const EyeballTransitGame&) const {
      throw ValidationError("eyeball_transit has no side payment");
    }
  };
  return std::visit(Visitor{}, s);
}

Scenario with_side_payment(const Scenario& s, double ps) {
  require_finite(ps, "p_s");
  struct Visitor {
    double ps;
    Scenario operator()(CommunalLinearGame g) const { g.side_payment = ps; return g; }
    Scenario operator()(SplitLinearGame g) const { g.side_payment = ps; return g; }
    Scenario operator()(PwlCommunalGame g) const { g.side_payment = ps; return g; }
    Scenario operator()(SmoothCommunalGame g) const { g.side_payment = ps; return g; }
    Scenario operator()(const SmoothSplitGame& g) const {
      return SmoothSplitGame(g.first().max_demand(), g.second().max_demand(),
                             g.first().max_price(), g.first().exponent(), ps);
    }
    Scenario operator()(const EyeballTransitGame&) const {
      throw ValidationError("eyeball_transit has no side payment");
    }
  };
  return std::visit(Visitor{ps}, s);
}

Payoffs utilities(const Scenario& s, const PricePoint& p) {
  require_prices(p);
  return std::visit(PayoffVisitor{p}, s);
}

double utility(const Scenario& s, Player k, const PricePoint& p) {
  return utilities(s, p).of(k);
}

Gradient utility_gradient(const Scenario& s, const PricePoint& p) {
  require_prices(p);
  return std::visit(GradientVisitor{p}, s);
}

Slope utility_partial(const Scenario& s, Player k, const PricePoint& p) {
  return utility_gradient(s, p).of(k);
}

double price_ceiling(const Scenario& s) { return std::visit(CeilingVisitor{}, s); }

bool demand_positive(const Scenario& s, const PricePoint& p) {
  require_prices(p);
  return std::visit(DemandPositiveVisitor{p}, s);
}

}  // namespace ispgame
