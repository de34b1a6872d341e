#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ispgame/equilibrium.hpp"
#include "ispgame/game.hpp"

namespace ispgame {

// Uniform price grid lo, lo + step, ... up to hi. Points are computed as
// lo + i * step, never by accumulation.
class GridSpec {
 public:
  static constexpr double kMaxPoints = 1e7;

  GridSpec(double lo, double hi, double step);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  std::size_t size() const { return size_; }
  double at(std::size_t i) const { return lo_ + static_cast<double>(i) * step_; }

 private:
  double lo_;
  double hi_;
  double step_;
  std::size_t size_;
};

// Grid [0, price_ceiling] with step 1e-3 * ceiling unless given.
GridSpec default_grid(const Scenario& s, std::optional<double> step = std::nullopt);

// Grid argmax of player k's utility with the opponent fixed; ties go to the
// lowest price.
double best_response(const Scenario& s, Player k, double opponent_price,
                     const GridSpec& grid);

struct GridNepPoint {
  PricePoint prices;        // representative: smallest max deviation gain
  std::size_t members = 0;  // grid points in the connected cluster
};

struct GridNepSegment {
  double price_sum = 0.0;
  double p1_lower = 0.0;  // smallest p1 in the run
  double p1_upper = 0.0;  // largest p1 in the run
  std::size_t members = 0;
};

struct GridNepResult {
  double grid_step = 0.0;
  double epsilon = 0.0;
  std::vector<PricePoint> raw;  // every interior eps-NEP grid point, sorted (p1, p2)
  std::size_t boundary_points = 0;  // eps-NEPs discarded as non-interior
  std::vector<GridNepPoint> points;
  std::vector<GridNepSegment> segments;
};

nlohmann::json to_json(const GridNepResult& r);

// Exhaustive eps-NEP search on grid x grid. Only interior points (positive
// prices and demands) are kept. Connected clusters elongated along
// p1 + p2 = const (at least min_segment_run points) are reported as
// segments, the rest as points.
GridNepResult find_grid_neps(const Scenario& s, const GridSpec& grid,
                             std::optional<double> epsilon = std::nullopt,
                             std::size_t min_segment_run = 10);

// Central difference [U_k*(+h) - U_k*(-h)] / 2h of the equilibrium utility
// in the side payment around p_s = 0. h defaults to 1e-4 * p*.
double numeric_profit_derivative(const Scenario& family,
                                 std::optional<double> h = std::nullopt,
                                 Player k = Player::first,
                                 FormulaMode mode = FormulaMode::as_derived);

}  // namespace ispgame
