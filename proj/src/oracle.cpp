#include "ispgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"

namespace ispgame {

GridSpec::GridSpec(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("grid requires finite lo < hi, got [" + fmt12(lo) + ", " + fmt12(hi) + "]");
  }
  if (!std::isfinite(step) || !(step > 0.0)) {
    throw ValidationError("grid step must be finite and > 0, got " + fmt12(step));
  }
  const double intervals = (hi - lo) / step;
  if (intervals > kMaxPoints) {
    throw ValidationError("grid resource guard: (hi - lo)/step = " + fmt12(intervals) +
                          " exceeds " + fmt12(kMaxPoints));
  }
  // The tolerance keeps hi on the grid when (hi - lo)/step is integral up to
  // rounding.
  size_ = static_cast<std::size_t>(std::floor(intervals + 1e-9)) + 1;
}

GridSpec default_grid(const Scenario& s, std::optional<double> step) {
  const double ceiling = price_ceiling(s);
  return GridSpec(0.0, ceiling, step.value_or(1e-3 * ceiling));
}

double best_response(const Scenario& s, Player k, double opponent_price, const GridSpec& grid) {
  PricePoint p = k == Player::first ? PricePoint{0.0, opponent_price} : PricePoint{opponent_price, 0.0};
  double best_price = grid.at(0);
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.at(i);
    const double u = utility(s, k, p.with_own(k, x));
    if (u > best_value) {
      best_value = u;
      best_price = x;
    }
  }
  return best_price;
}

nlohmann::json to_json(const GridNepResult& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    points.push_back({{"p1", p.prices.p1}, {"p2", p.prices.p2}, {"members", p.members}});
  }
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : r.segments) {
    segments.push_back({{"p_sum", s.price_sum}, {"p1_lo", s.p1_lower}, {"p1_hi", s.p1_upper},
                        {"members", s.members}});
  }
  return {{"grid_step", r.grid_step},   {"epsilon", r.epsilon},
          {"raw_count", r.raw.size()},  {"boundary_points", r.boundary_points},
          {"points", points},           {"segments", segments}};
}

GridNepResult find_grid_neps(const Scenario& s, const GridSpec& grid,
                             std::optional<double> epsilon, std::size_t min_segment_run) {
  const std::size_t n = grid.size();
  if (static_cast<double>(n) * static_cast<double>(n) > 1e8) {
    throw ValidationError("grid resource guard: " + std::to_string(n) + "^2 cells exceeds 1e8");
  }

  // best1[j]: player 1's best grid utility against p2 = grid[j];
  // best2[i]: player 2's best against p1 = grid[i].
  std::vector<double> best1(n, -std::numeric_limits<double>::infinity());
  std::vector<double> best2(n, -std::numeric_limits<double>::infinity());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Payoffs u = utilities(s, {grid.at(i), grid.at(j)});
      best1[j] = std::max(best1[j], u.first);
      best2[i] = std::max(best2[i], u.second);
      max_abs = std::max({max_abs, std::abs(u.first), std::abs(u.second)});
    }
  }

  GridNepResult r;
  r.grid_step = grid.step();
  r.epsilon = epsilon.value_or(1e-6 * max_abs);
  if (!(r.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");

  struct Cell {
    std::size_t i, j;
    double worst_gain;
  };
  std::vector<Cell> cells;
  std::unordered_map<std::size_t, std::size_t> index;  // i * n + j -> cells index
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PricePoint p{grid.at(i), grid.at(j)};
      const Payoffs u = utilities(s, p);
      const double g1 = best1[j] - u.first;
      const double g2 = best2[i] - u.second;
      if (g1 > r.epsilon || g2 > r.epsilon) continue;
      if (!(p.p1 > 0.0 && p.p2 > 0.0 && demand_positive(s, p))) {
        ++r.boundary_points;
        continue;
      }
      index[i * n + j] = cells.size();
      cells.push_back({i, j, std::max(g1, g2)});
      r.raw.push_back(p);
    }
  }

  // 8-connected clusters, visited in (p1, p2) order so output is sorted.
  std::vector<bool> seen(cells.size(), false);
  for (std::size_t start = 0; start < cells.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      members.push_back(c);
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const auto ni = static_cast<long long>(cells[c].i) + di;
          const auto nj = static_cast<long long>(cells[c].j) + dj;
          if (ni < 0 || nj < 0 || ni >= static_cast<long long>(n) || nj >= static_cast<long long>(n)) {
            continue;
          }
          auto it = index.find(static_cast<std::size_t>(ni) * n + static_cast<std::size_t>(nj));
          if (it != index.end() && !seen[it->second]) {
            seen[it->second] = true;
            queue.push_back(it->second);
          }
        }
      }
    }
    std::sort(members.begin(), members.end());

    std::size_t i_min = n, i_max = 0, s_min = 2 * n, s_max = 0;
    double s_total = 0.0;
    for (std::size_t c : members) {
      i_min = std::min(i_min, cells[c].i);
      i_max = std::max(i_max, cells[c].i);
      const std::size_t sum = cells[c].i + cells[c].j;
      s_min = std::min(s_min, sum);
      s_max = std::max(s_max, sum);
      s_total += static_cast<double>(sum);
    }
    const std::size_t i_range = i_max - i_min;
    const std::size_t s_range = s_max - s_min;
    if (i_range + 1 >= min_segment_run && s_range <= std::max<std::size_t>(2, i_range / 5)) {
      const double mean_sum = s_total / static_cast<double>(members.size());
      r.segments.push_back({2.0 * grid.lo() + mean_sum * grid.step(), grid.at(i_min),
                            grid.at(i_max), members.size()});
    } else {
      std::size_t rep = members.front();
      for (std::size_t c : members) {
        if (cells[c].worst_gain < cells[rep].worst_gain) rep = c;
      }
      r.points.push_back({{grid.at(cells[rep].i), grid.at(cells[rep].j)}, members.size()});
    }
  }
  return r;
}

double numeric_profit_derivative(const Scenario& family, std::optional<double> h, Player k,
                                 FormulaMode mode) {
  auto solve_at = [&](double ps, const char* side) {
    const Scenario s = with_side_payment(family, ps);
    const Equilibrium eq = solve(s, mode);
    const auto* p = eq.point();
    if (!p) {
      std::string what = eq.none() ? eq.none()->reason : "a segment, U* is not single-valued";
      throw SolverFailure(std::string("re-solve at p_s = ") + side + " failed: " + what);
    }
    return utility(s, k, p->prices);
  };
  double step = 0.0;
  if (h) {
    step = *h;
  } else {
    const Equilibrium base = solve(with_side_payment(family, 0.0), mode);
    const auto* p = base.point();
    if (!p) throw SolverFailure("no interior point equilibrium at p_s = 0");
    step = 1e-4 * p->price_sum();
  }
  if (!(step > 0.0)) throw ValidationError("h must be > 0");
  return (solve_at(step, "+h") - solve_at(-step, "-h")) / (2.0 * step);
}

}  // namespace ispgame
