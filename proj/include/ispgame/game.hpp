#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "ispgame/demand.hpp"

namespace ispgame {

// Player 1 is the ISP (or ISP a), player 2 the CP (or ISP b).
enum class Player { first, second };

struct PricePoint {
  double p1 = 0.0;
  double p2 = 0.0;

  double sum() const { return p1 + p2; }
  double own(Player k) const { return k == Player::first ? p1 : p2; }
  double other(Player k) const { return k == Player::first ? p2 : p1; }
  PricePoint with_own(Player k, double price) const {
    return k == Player::first ? PricePoint{price, p2} : PricePoint{p1, price};
  }
  bool operator==(const PricePoint&) const = default;
};

struct Payoffs {
  double first = 0.0;
  double second = 0.0;

  double of(Player k) const { return k == Player::first ? first : second; }
};

// One-sided own-price partials (dU1/dp1, dU2/dp2).
struct Gradient {
  Slope first;
  Slope second;

  const Slope& of(Player k) const { return k == Player::first ? first : second; }
};

enum class ScenarioKind {
  communal_linear,
  split_linear_bandwidth,
  split_linear_content,
  pwl_communal,
  smooth_communal,
  smooth_split,
  eyeball_transit,
};

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

// U1 = (p1 + p_s) D,  U2 = (p2 - p_s) D with D = D(p1 + p2).
struct CommunalLinearGame {
  LinearDemand demand;
  double side_payment = 0.0;
};

enum class Factoring {
  bandwidth,  // U1 = (p1 + p_s) D1,       U2 = p2 D2 - p_s D1
  content,    // U1 = p1 D1 + p_s D2,      U2 = (p2 - p_s) D2
};

struct SplitLinearGame {
  SplitLinearDemand demand;
  Factoring factoring = Factoring::bandwidth;
  double side_payment = 0.0;
};

struct PwlCommunalGame {
  PwlConvexDemand demand;
  double side_payment = 0.0;
};

struct SmoothCommunalGame {
  SmoothConvexDemand demand;
  double side_payment = 0.0;
};

// Split demands differing only in D_max, sharing (p_max, alpha):
//   U1 = D1 (p1 + p_s),  U2 = D2 p2 - D1 p_s.
class SmoothSplitGame {
 public:
  SmoothSplitGame(double first_max_demand, double second_max_demand,
                  double max_price, double exponent, double side_payment);

  const SmoothConvexDemand& first() const { return first_; }
  const SmoothConvexDemand& second() const { return second_; }
  double side_payment() const { return side_payment_; }

 private:
  SmoothConvexDemand first_;
  SmoothConvexDemand second_;
  double side_payment_;
};

// Two eyeball ISPs a and b with net-transit revenue at price p_t:
//   U_a = D_a(p_a) p_a + [Phi_b D_a(p_b) - Phi_a D_b(p_a)]^+ p_t
//   U_b = D_b(p_b) p_b + [Phi_a D_b(p_a) - Phi_b D_a(p_b)]^+ p_t
class EyeballTransitGame {
 public:
  EyeballTransitGame(double max_demand_a, double max_demand_b, double max_price,
                     double exponent, double miss_fraction_a,
                     double miss_fraction_b, double transit_price);

  const SmoothConvexDemand& demand_a() const { return demand_a_; }
  const SmoothConvexDemand& demand_b() const { return demand_b_; }
  double miss_fraction_a() const { return miss_fraction_a_; }  // Phi_a
  double miss_fraction_b() const { return miss_fraction_b_; }  // Phi_b
  double transit_price() const { return transit_price_; }      // p_t

  double max_price() const { return demand_a_.max_price(); }
  double exponent() const { return demand_a_.exponent(); }
  // delta = D_max,b / D_max,a
  double demand_factor() const;
  // phi = Phi_b / Phi_a
  double caching_factor() const { return miss_fraction_b_ / miss_fraction_a_; }

  // Net flow priced to a: Phi_b D_a(p_b) - Phi_a D_b(p_a). Positive means a
  // earns transit revenue, negative means b does.
  double net_flow_to_a(const PricePoint& p) const;

 private:
  SmoothConvexDemand demand_a_;
  SmoothConvexDemand demand_b_;
  double miss_fraction_a_;
  double miss_fraction_b_;
  double transit_price_;
};

using Scenario = std::variant<CommunalLinearGame, SplitLinearGame, PwlCommunalGame,
                              SmoothCommunalGame, SmoothSplitGame, EyeballTransitGame>;

ScenarioKind kind_of(const Scenario& s);

// Side payment of the scenario; throws ValidationError for eyeball_transit.
double side_payment_of(const Scenario& s);
Scenario with_side_payment(const Scenario& s, double side_payment);

Payoffs utilities(const Scenario& s, const PricePoint& p);
double utility(const Scenario& s, Player k, const PricePoint& p);
Gradient utility_gradient(const Scenario& s, const PricePoint& p);
Slope utility_partial(const Scenario& s, Player k, const PricePoint& p);

// Lowest price at which every demand of the scenario is zero.
double price_ceiling(const Scenario& s);

// True when every demand the scenario's revenues depend on is strictly
// positive at p.
bool demand_positive(const Scenario& s, const PricePoint& p);

}  // namespace ispgame
