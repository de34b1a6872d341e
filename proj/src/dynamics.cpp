#include "ispgame/dynamics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"

namespace ispgame {
namespace {

constexpr double kStationaryDisplacement = 1e-10;
constexpr int kScanIntervals = 512;

PricePoint velocity(const Scenario& s, const PricePoint& p, DynamicsMode mode) {
  switch (mode) {
    case DynamicsMode::printed: {
      const Gradient g = utility_gradient(s, p);
      return {g.first.right - p.p1, g.second.right - p.p2};
    }
    case DynamicsMode::gradient: {
      const Gradient g = utility_gradient(s, p);
      return {g.first.right, g.second.right};
    }
    case DynamicsMode::best_response_relaxation:
      return {continuous_best_response(s, Player::first, p.p2) - p.p1,
              continuous_best_response(s, Player::second, p.p1) - p.p2};
  }
  return {};
}

}  // namespace

DynamicsMode parse_dynamics_mode(std::string_view name) {
  if (name == "printed") return DynamicsMode::printed;
  if (name == "gradient") return DynamicsMode::gradient;
  if (name == "best_response_relaxation" || name == "br") {
    return DynamicsMode::best_response_relaxation;
  }
  throw ValidationError("unknown dynamics mode '" + std::string(name) +
                        "' (expected printed, gradient or best_response_relaxation)");
}

std::string_view to_string(DynamicsMode mode) {
  switch (mode) {
    case DynamicsMode::printed: return "printed";
    case DynamicsMode::gradient: return "gradient";
    case DynamicsMode::best_response_relaxation: return "best_response_relaxation";
  }
  return "unknown";
}

double continuous_best_response(const Scenario& s, Player k, double opponent_price) {
  const double ceiling = price_ceiling(s);
  const PricePoint base =
      k == Player::first ? PricePoint{0.0, opponent_price} : PricePoint{opponent_price, 0.0};
  auto at = [&](int i) { return ceiling * static_cast<double>(i) / kScanIntervals; };
  auto value = [&](double x) { return utility(s, k, base.with_own(k, x)); };

  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScanIntervals; ++i) {
    const double u = value(at(i));
    if (u > best_value) {
      best_value = u;
      best = i;
    }
  }

  // Bisection keeps dU/dp > 0 at lo and <= 0 at hi, so it converges to a
  // local maximum inside the bracket around the scan winner.
  double lo = at(std::max(best - 1, 0));
  double hi = at(std::min(best + 1, kScanIntervals));
  auto slope = [&](double x) { return utility_partial(s, k, base.with_own(k, x)).right; };
  double refined = at(best);
  if (!(slope(lo) > 0.0)) {
    refined = lo;
  } else if (slope(hi) > 0.0) {
    refined = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * ceiling; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    refined = lo;
  }
  return value(refined) >= best_value ? refined : at(best);
}

Trajectory integrate(const Scenario& s, const PricePoint& init, DynamicsMode mode, double dt,
                     double t_max) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be finite and > 0");
  if (!(t_max >= dt) || !std::isfinite(t_max)) throw ValidationError("t_max must be >= dt");
  const double ceiling = price_ceiling(s);
  if (!(init.p1 >= 0.0 && init.p2 >= 0.0 && init.p1 <= ceiling && init.p2 <= ceiling)) {
    throw ValidationError("initial prices must lie in [0, " + fmt12(ceiling) + "]^2");
  }

  const auto steps = static_cast<long long>(std::floor(t_max / dt + 1e-9));
  Trajectory tr;
  PricePoint p = init;
  tr.times.push_back(0.0);
  tr.points.push_back(p);
  tr.payoffs.push_back(utilities(s, p));
  for (long long n = 1; n <= steps; ++n) {
    const PricePoint v = velocity(s, p, mode);
    const PricePoint next{std::max(0.0, p.p1 + dt * v.p1), std::max(0.0, p.p2 + dt * v.p2)};
    const double moved = std::hypot(next.p1 - p.p1, next.p2 - p.p2);
    p = next;
    tr.times.push_back(static_cast<double>(n) * dt);
    tr.points.push_back(p);
    tr.payoffs.push_back(utilities(s, p));
    if (moved < kStationaryDisplacement) break;
  }
  return tr;
}

VectorField sample_field(const Scenario& s, double lo, double hi, std::size_t resolution) {
  if (resolution < 2) throw ValidationError("field resolution must be >= 2");
  if (!(lo >= 0.0) || !(lo < hi) || !std::isfinite(hi)) {
    throw ValidationError("field box requires 0 <= lo < hi");
  }
  VectorField f{lo, hi, resolution, {}};
  f.nodes.reserve(resolution * resolution);
  const double span = hi - lo;
  const auto last = static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      const PricePoint at{lo + span * static_cast<double>(i) / last,
                          lo + span * static_cast<double>(j) / last};
      f.nodes.push_back({at, utility_gradient(s, at)});
    }
  }
  return f;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,p1,p2,U1,U2\n";
  for (std::size_t n = 0; n < tr.points.size(); ++n) {
    os << fmt12(tr.times[n]) << ',' << fmt12(tr.points[n].p1) << ',' << fmt12(tr.points[n].p2)
       << ',' << fmt12(tr.payoffs[n].first) << ',' << fmt12(tr.payoffs[n].second) << '\n';
  }
}

void write_field_csv(std::ostream& os, const VectorField& field) {
  os << "p1,p2,dU1_dp1,dU2_dp2\n";
  for (const auto& node : field.nodes) {
    os << fmt12(node.at.p1) << ',' << fmt12(node.at.p2) << ',' << fmt12(node.gradient.first.right)
       << ',' << fmt12(node.gradient.second.right) << '\n';
  }
}

}  // namespace ispgame
