#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ispgame/game.hpp"

namespace ispgame {

enum class DynamicsMode {
  printed,                   // dp_k/dt = dU_k/dp_k - p_k
  gradient,                  // dp_k/dt = dU_k/dp_k
  best_response_relaxation,  // dp_k/dt = BR_k(p_-k) - p_k
};

DynamicsMode parse_dynamics_mode(std::string_view name);
std::string_view to_string(DynamicsMode mode);

struct Trajectory {
  std::vector<double> times;
  std::vector<PricePoint> points;
  std::vector<Payoffs> payoffs;

  const PricePoint& terminal() const { return points.back(); }
};

// Explicit Euler with prices clamped at zero; right-side partials at kinks.
// Stops early once a step moves the state by less than 1e-10.
Trajectory integrate(const Scenario& s, const PricePoint& init, DynamicsMode mode,
                     double dt, double t_max);

// Continuous best response over [0, price_ceiling]: coarse scan, then
// bisection on the own-price partial inside the winning bracket.
double continuous_best_response(const Scenario& s, Player k, double opponent_price);

struct FieldNode {
  PricePoint at;
  Gradient gradient;  // both sides kept; CSV and dynamics use the right side
};

struct VectorField {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t resolution = 0;
  std::vector<FieldNode> nodes;  // p1-major: index = i * resolution + j
};

VectorField sample_field(const Scenario& s, double lo, double hi,
                         std::size_t resolution);

// t,p1,p2,U1,U2
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
// p1,p2,dU1_dp1,dU2_dp2
void write_field_csv(std::ostream& os, const VectorField& field);

}  // namespace ispgame
