#include "ispgame/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"
#include "ispgame/oracle.hpp"

namespace ispgame {
namespace {

Equilibrium make_point(double p1, double p2, std::string label) {
  return Equilibrium{PointEquilibrium{{p1, p2}, std::move(label)}, {}, {}};
}

Equilibrium make_none(std::string reason) {
  return Equilibrium{NoEquilibrium{std::move(reason)}, {}, {}};
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Symmetric split p*/2 -/+ p_s shared by every communal solver.
std::optional<PricePoint> communal_split(double price_sum, double ps) {
  if (!(std::abs(ps) < price_sum / 2.0)) return std::nullopt;
  return PricePoint{price_sum / 2.0 - ps, price_sum / 2.0 + ps};
}

// Largest utility player k can reach on the convex PWL demand with the
// opponent fixed. Each linear piece gives a concave quadratic in the own
// price, so the maximum is a clipped vertex or a piece endpoint.
double pwl_best_reply_value(const PwlCommunalGame& g, Player k, const PricePoint& at) {
  const Scenario s = g;
  const auto& m = g.demand;
  const double other = at.other(k);
  const double sign = k == Player::first ? 1.0 : -1.0;
  const double ps = g.side_payment;
  std::vector<double> xs{0.0};

  struct Piece {
    double intercept, sensitivity, q_lo, q_hi;
  };
  const std::array<Piece, 2> pieces{{
      {m.max_demand(), m.max_sensitivity(), 0.0, m.threshold_price()},
      {m.shifted_intercept(), m.threshold_sensitivity(), m.threshold_price(), m.max_price()},
  }};
  for (const auto& piece : pieces) {
    const double x_lo = std::max(0.0, piece.q_lo - other);
    const double x_hi = piece.q_hi - other;
    if (x_hi <= x_lo) continue;
    // argmax of (x + sign ps)(A - B(x + other))
    const double vertex = 0.5 * ((piece.intercept / piece.sensitivity - other) - sign * ps);
    xs.push_back(std::clamp(vertex, x_lo, x_hi));
    xs.push_back(x_lo);
    xs.push_back(x_hi);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (double x : xs) best = std::max(best, utility(s, k, at.with_own(k, std::max(x, 0.0))));
  return best;
}

bool pwl_is_best_reply(const PwlCommunalGame& g, const PricePoint& at) {
  const Scenario s = g;
  for (Player k : {Player::first, Player::second}) {
    const double here = utility(s, k, at);
    const double best = pwl_best_reply_value(g, k, at);
    if (best > here + 1e-12 * std::max(1.0, std::abs(here))) return false;
  }
  return true;
}

Equilibrium solve_pwl_printed(const PwlCommunalGame& g) {
  const auto& m = g.demand;
  const double dm = m.max_demand();
  const double dt = m.threshold_demand();
  const double sm = m.max_sensitivity();
  const double st = m.threshold_sensitivity();
  const double p_theta = m.threshold_price();
  const double ps = g.side_payment;
  std::vector<std::string> failed;

  const double p_high = 2.0 * dm / (3.0 * sm);
  if (3.0 * dt > dm) {
    if (auto p = communal_split(p_high, ps)) return make_point(p->p1, p->p2, "p*>p_theta");
    failed.push_back("case p*>p_theta: |p_s| >= p*/2 = " + fmt12(p_high / 2.0));
  } else {
    failed.push_back("case p*>p_theta: 3 D_theta <= D_max");
  }

  const double p_low = 2.0 * dt / (3.0 * st);
  if (p_low < p_theta) {
    if (auto p = communal_split(p_low, ps)) return make_point(p->p1, p->p2, "p*<p_theta");
    failed.push_back("case p*<p_theta: |p_s| >= p*/2 = " + fmt12(p_low / 2.0));
  } else {
    failed.push_back("case p*<p_theta: 2 D_theta/(3 d_theta) >= p_theta");
  }

  const double lo = std::max({dt / sm - ps, 2.0 * p_theta - dt / st - ps, 0.0});
  const double hi = std::min({(dm - 2.0 * dt) / sm - ps, dt / st - p_theta - ps, p_theta});
  if (lo < hi) {
    return Equilibrium{SegmentEquilibrium{p_theta, lo, hi, "p*=p_theta"}, {}, {}};
  }
  failed.push_back("case p*=p_theta: empty interval (" + fmt12(lo) + ", " + fmt12(hi) + ")");
  return make_none(join(failed, "; "));
}

Equilibrium solve_pwl_derived(const PwlCommunalGame& g) {
  const auto& m = g.demand;
  const double ps = g.side_payment;
  const double p_theta = m.threshold_price();
  std::vector<PointEquilibrium> found;
  std::vector<std::string> failed;

  auto consider = [&](double price_sum, bool on_branch, const char* label,
                      const char* branch_condition) {
    if (!on_branch) {
      failed.push_back(std::string(label) + ": " + branch_condition);
      return;
    }
    auto p = communal_split(price_sum, ps);
    if (!p) {
      failed.push_back(std::string(label) + ": |p_s| >= p*/2 = " + fmt12(price_sum / 2.0));
      return;
    }
    if (!pwl_is_best_reply(g, *p)) {
      failed.push_back(std::string(label) + ": FOC point is not a global best reply");
      return;
    }
    found.push_back({*p, label});
  };

  const double p_steep = 2.0 * m.max_demand() / (3.0 * m.max_sensitivity());
  consider(p_steep, p_steep < p_theta, "p*<p_theta", "2 D_max/(3 d_max) >= p_theta");
  const double p_shallow = 2.0 * m.shifted_intercept() / (3.0 * m.threshold_sensitivity());
  consider(p_shallow, p_theta < p_shallow && p_shallow < m.max_price(), "p*>p_theta",
           "2 D_hat/(3 d_theta) outside (p_theta, p_max)");

  if (found.empty()) return make_none(join(failed, "; "));
  Equilibrium eq{found.front(), {}, {}};
  eq.alternatives.assign(found.begin() + 1, found.end());
  if (!eq.alternatives.empty()) eq.warnings.push_back("multiple interior equilibria");
  return eq;
}

// Largest value of a function that is quadratic between consecutive
// breakpoints: endpoints plus the vertex of each concave piece, located from
// three samples.
template <class F>
double piecewise_quadratic_max(F f, const std::vector<double>& breaks) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    best = std::max({best, fa, fm, fb});
    const double curvature = fa - 2.0 * fm + fb;
    if (curvature < 0.0) {
      const double vertex = m + 0.25 * (b - a) * (fa - fb) / curvature;
      if (a < vertex && vertex < b) best = std::max(best, f(vertex));
    }
  }
  return best;
}

bool split_is_best_reply(const SplitLinearGame& g, const PricePoint& at, std::string& why) {
  const Scenario s = g;
  const double top = std::max(g.demand.first_ratio(), g.demand.second_ratio());
  for (Player k : {Player::first, Player::second}) {
    const double other = at.other(k);
    std::vector<double> breaks{0.0};
    for (double kink : {g.demand.first_ratio() - other, g.demand.second_ratio() - other,
                        top - other + 1.0}) {
      if (kink > 0.0) breaks.push_back(kink);
    }
    std::sort(breaks.begin(), breaks.end());
    auto u = [&](double x) { return utility(s, k, at.with_own(k, x)); };
    const double here = utility(s, k, at);
    const double best = piecewise_quadratic_max(u, breaks);
    if (best > here + 1e-12 * std::max(1.0, std::abs(here))) {
      why = std::string(k == Player::first ? "U1" : "U2") + " = " + fmt12(here) +
            " at the FOC point but a deviation reaches " + fmt12(best);
      return false;
    }
  }
  return true;
}

struct Vec2 {
  double a, b;
};

}  // namespace

FormulaMode parse_formula_mode(std::string_view name) {
  if (name == "printed" || name == "as_printed") return FormulaMode::as_printed;
  if (name == "derived" || name == "as_derived") return FormulaMode::as_derived;
  throw ValidationError("unknown formula mode '" + std::string(name) +
                        "' (expected printed or derived)");
}

std::string_view to_string(FormulaMode mode) {
  return mode == FormulaMode::as_printed ? "printed" : "derived";
}

nlohmann::json to_json(const Equilibrium& eq) {
  nlohmann::json j;
  if (const auto* p = eq.point()) {
    j = {{"type", "point"}, {"p1", p->prices.p1}, {"p2", p->prices.p2},
         {"p_star", p->price_sum()}, {"case", p->case_label}};
  } else if (const auto* s = eq.segment()) {
    j = {{"type", "segment"}, {"p_sum", s->price_sum}, {"p1_lo", s->p1_lower},
         {"p1_hi", s->p1_upper}, {"case", s->case_label}};
  } else {
    j = {{"type", "none"}, {"reason", eq.none()->reason}};
  }
  if (!eq.alternatives.empty()) {
    auto& alts = j["alternatives"] = nlohmann::json::array();
    for (const auto& a : eq.alternatives) {
      alts.push_back({{"p1", a.prices.p1}, {"p2", a.prices.p2}, {"p_star", a.price_sum()},
                      {"case", a.case_label}});
    }
  }
  if (!eq.warnings.empty()) j["warnings"] = eq.warnings;
  return j;
}

Equilibrium solve_communal_linear(const CommunalLinearGame& g) {
  const double bound = g.demand.max_demand() / (3.0 * g.demand.sensitivity());
  const double ps = g.side_payment;
  if (!(std::abs(ps) < bound)) {
    return make_none("|p_s| >= D_max/(3d) (|p_s| = " + fmt12(std::abs(ps)) +
                     ", D_max/(3d) = " + fmt12(bound) + ")");
  }
  return make_point(bound - ps, bound + ps, "interior");
}

Equilibrium solve_split_linear(const SplitLinearGame& g) {
  const double delta1 = g.demand.first_ratio();
  const double delta2 = g.demand.second_ratio();
  const double d1 = g.demand.first.sensitivity();
  const double d2 = g.demand.second.sensitivity();
  const double ps = g.side_payment;

  double p = 0.0, p1 = 0.0, p2 = 0.0;
  if (g.factoring == Factoring::bandwidth) {
    p = (delta1 - ps + delta2 + (d1 / d2) * ps) / 3.0;
    p1 = delta1 - p - ps;
    p2 = p - p1;
  } else {
    // Bandwidth solution with the providers swapped and p_s -> -p_s.
    p = (delta2 + ps + delta1 - (d2 / d1) * ps) / 3.0;
    p2 = delta2 - p + ps;
    p1 = p - p2;
  }
  if (!(p1 > 0.0)) return make_none("p1* = " + fmt12(p1) + " is not > 0");
  if (!(p2 > 0.0)) return make_none("p2* = " + fmt12(p2) + " is not > 0");
  if (!(g.demand.first.value(p) > 0.0)) return make_none("D1(p*) is not > 0");
  if (!(g.demand.second.value(p) > 0.0)) return make_none("D2(p*) is not > 0");
  std::string why;
  if (!split_is_best_reply(g, {p1, p2}, why)) {
    return make_none("FOC point is not a global best reply: " + why);
  }
  return make_point(p1, p2, "interior");
}

Equilibrium solve_pwl_communal(const PwlCommunalGame& g, FormulaMode mode) {
  return mode == FormulaMode::as_printed ? solve_pwl_printed(g) : solve_pwl_derived(g);
}

double smooth_price_sum_root(const SmoothConvexDemand& demand) {
  auto g = [&demand](double p) { return 2.0 * demand.value(p) + p * demand.slope(p).right; };
  const double p_max = demand.max_price();
  const double g0 = g(0.0);
  double hi = 0.0;
  double g_hi = 0.0;
  for (int k = 1; k <= 60; ++k) {
    hi = p_max * (1.0 - std::ldexp(1.0, -k));
    g_hi = g(hi);
    if (g_hi < 0.0) break;
  }
  if (!(g_hi < 0.0)) throw SolverFailure("2D + pD' = 0: could not bracket a root");
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      g, 0.0, hi, g0, g_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (a + b);
}

Equilibrium solve_smooth(const SmoothCommunalGame& g) {
  const auto& m = g.demand;
  const double p_star = 2.0 * m.max_price() / (2.0 + m.exponent());

  const double residual = 2.0 * m.value(p_star) + p_star * m.slope(p_star).right;
  const double root = smooth_price_sum_root(m);
  if (std::abs(residual) > 1e-12 * m.max_demand() ||
      std::abs(root - p_star) > 1e-12 * m.max_price()) {
    throw SolverFailure("closed-form p* failed root check: residual " + fmt12(residual) +
                        ", bracketed root " + fmt12(root));
  }
  auto p = communal_split(p_star, g.side_payment);
  if (!p) {
    return make_none("|p_s| >= p*/2 (|p_s| = " + fmt12(std::abs(g.side_payment)) +
                     ", p*/2 = " + fmt12(p_star / 2.0) + ")");
  }
  return make_point(p->p1, p->p2, "interior");
}

Equilibrium solve_smooth(const SmoothSplitGame& g) {
  const Scenario s = g;
  const double p_max = g.first().max_price();
  const double alpha = g.first().exponent();
  const double ps = g.side_payment();
  const double tolerance =
      1e-10 * std::max({1.0, g.first().max_demand(), g.second().max_demand()});
  constexpr int kMaxIterations = 10000;

  auto inside = [p_max](const PricePoint& p) {
    return p.p1 >= 0.0 && p.p2 >= 0.0 && p.sum() < p_max;
  };
  auto foc = [&s](const PricePoint& p) {
    const Gradient grad = utility_gradient(s, p);
    return Vec2{grad.first.right, grad.second.right};
  };
  auto norm = [](const Vec2& v) { return std::max(std::abs(v.a), std::abs(v.b)); };

  const double half = p_max / (2.0 + alpha);
  PricePoint p{std::clamp(half - ps, 0.0, p_max / 2.0), std::clamp(half + ps, 0.0, p_max / 2.0)};
  Vec2 f = foc(p);
  double r = norm(f);
  const double h = 1e-7 * p_max;

  int it = 0;
  for (; it < kMaxIterations && r > tolerance; ++it) {
    // Central-difference Jacobian of the analytic FOCs.
    auto column = [&](bool first) {
      PricePoint up = p, down = p;
      double& u = first ? up.p1 : up.p2;
      double& d = first ? down.p1 : down.p2;
      u += h;
      d = std::max(d - h, 0.0);
      const double width = (first ? up.p1 - down.p1 : up.p2 - down.p2);
      const Vec2 fu = foc(up), fd = foc(down);
      return Vec2{(fu.a - fd.a) / width, (fu.b - fd.b) / width};
    };
    const Vec2 c1 = column(true);
    const Vec2 c2 = column(false);
    const double det = c1.a * c2.b - c2.a * c1.b;
    Vec2 step{};
    if (std::abs(det) > 1e-300) {
      step = {-(c2.b * f.a - c2.a * f.b) / det, -(-c1.b * f.a + c1.a * f.b) / det};
    } else {
      step = {f.a * 1e-2 * p_max, f.b * 1e-2 * p_max};
    }

    bool accepted = false;
    for (double lambda = 1.0; lambda > 1e-12; lambda *= 0.5) {
      const PricePoint trial{p.p1 + lambda * step.a, p.p2 + lambda * step.b};
      if (!inside(trial)) continue;
      const Vec2 ft = foc(trial);
      if (norm(ft) < r) {
        p = trial;
        f = ft;
        r = norm(ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const PricePoint full{p.p1 + step.a, p.p2 + step.b};
      if (!inside(full)) {
        return make_none("FOC iteration exits [0, p_max]^2 near (" + fmt12(p.p1) + ", " +
                         fmt12(p.p2) + ")");
      }
      throw SolverFailure("smooth_split FOC iteration stalled, residual " + fmt12(r));
    }
  }
  if (r > tolerance) {
    throw SolverFailure("smooth_split FOC iteration did not converge in " +
                        std::to_string(kMaxIterations) + " iterations, residual " + fmt12(r));
  }
  if (!(p.p1 > 0.0)) return make_none("p1* = " + fmt12(p.p1) + " is not > 0");
  if (!(p.p2 > 0.0)) return make_none("p2* = " + fmt12(p.p2) + " is not > 0");
  if (!demand_positive(s, p)) return make_none("demand at p* is not > 0");
  // Pricing both demands to zero guarantees either player 0.
  const Payoffs u = utilities(s, p);
  if (u.first < 0.0 || u.second < 0.0) {
    return make_none("FOC point is not a global best reply: U = (" + fmt12(u.first) + ", " +
                     fmt12(u.second) + ") has a negative entry");
  }
  return make_point(p.p1, p.p2, "interior");
}

EyeballCandidate eyeball_case_a(const EyeballTransitGame& g, FormulaMode mode) {
  const double alpha = g.exponent();
  const double coeff = mode == FormulaMode::as_derived ? g.miss_fraction_a() : g.miss_fraction_b();
  EyeballCandidate c;
  c.prices.p2 = g.max_price() / (1.0 + alpha);
  c.prices.p1 = c.prices.p2 + alpha * coeff * g.demand_factor() / (1.0 + alpha) * g.transit_price();
  c.interior = c.prices.p1 > 0.0 && c.prices.p2 > 0.0 && c.prices.p1 < g.max_price() &&
               c.prices.p2 < g.max_price();
  if (c.prices.p1 >= 0.0 && c.prices.p2 >= 0.0) {
    c.net_flow_to_a = g.net_flow_to_a(c.prices);
    c.case_holds = c.net_flow_to_a > 0.0;
  }
  if (!(g.transit_price() < std::min(c.prices.p1, c.prices.p2))) {
    c.transit_warning = "p_t >= min{p_a*, p_b*} for case A";
  }
  return c;
}

EyeballCandidate eyeball_case_b(const EyeballTransitGame& g, FormulaMode mode) {
  const double alpha = g.exponent();
  const double coeff = mode == FormulaMode::as_derived ? g.miss_fraction_b() : g.miss_fraction_a();
  EyeballCandidate c;
  c.prices.p1 = g.max_price() / (1.0 + alpha);
  c.prices.p2 = c.prices.p1 + alpha * (coeff / g.demand_factor()) / (1.0 + alpha) * g.transit_price();
  c.interior = c.prices.p1 > 0.0 && c.prices.p2 > 0.0 && c.prices.p1 < g.max_price() &&
               c.prices.p2 < g.max_price();
  if (c.prices.p1 >= 0.0 && c.prices.p2 >= 0.0) {
    c.net_flow_to_a = g.net_flow_to_a(c.prices);
    c.case_holds = c.net_flow_to_a < 0.0;
  }
  if (!(g.transit_price() < std::min(c.prices.p1, c.prices.p2))) {
    c.transit_warning = "p_t >= min{p_a*, p_b*} for case B";
  }
  return c;
}

Equilibrium solve_eyeball(const EyeballTransitGame& g, FormulaMode mode) {
  const EyeballCandidate a = eyeball_case_a(g, mode);
  const EyeballCandidate b = eyeball_case_b(g, mode);
  const bool ok_a = a.case_holds && a.interior;
  const bool ok_b = b.case_holds && b.interior;
  constexpr const char* kLabelA = "A: net flow priced to ISP a";
  constexpr const char* kLabelB = "B: net flow priced to ISP b";

  Equilibrium eq;
  if (ok_a) {
    eq.value = PointEquilibrium{a.prices, kLabelA};
    if (ok_b) {
      eq.alternatives.push_back({b.prices, kLabelB});
      eq.warnings.push_back("multiple equilibria: case B is also consistent");
    }
    if (a.transit_warning) eq.warnings.push_back(*a.transit_warning);
  } else if (ok_b) {
    eq.value = PointEquilibrium{b.prices, kLabelB};
    if (b.transit_warning) eq.warnings.push_back(*b.transit_warning);
  } else if (a.net_flow_to_a == 0.0 && b.net_flow_to_a == 0.0) {
    eq.value = NoEquilibrium{"balanced flow: Phi_b D_a(p_b*) = Phi_a D_b(p_a*) for both cases"};
  } else {
    auto why = [](const EyeballCandidate& c, const char* name) {
      std::string s = std::string("case ") + name + " at (" + fmt12(c.prices.p1) + ", " +
                      fmt12(c.prices.p2) + "): ";
      if (!c.interior) return s + "not interior";
      return s + "case inequality fails (net flow to a = " + fmt12(c.net_flow_to_a) + ")";
    };
    eq.value = NoEquilibrium{why(a, "A") + "; " + why(b, "B")};
  }
  if (!(g.demand_factor() < 1.0)) {
    eq.warnings.push_back("delta = D_max_b/D_max_a >= 1; the usual convention takes delta < 1");
  }
  return eq;
}

Equilibrium solve(const Scenario& s, FormulaMode mode) {
  struct Visitor {
    FormulaMode mode;
    Equilibrium operator()(const CommunalLinearGame& g) const { return solve_communal_linear(g); }
    Equilibrium operator()(const SplitLinearGame& g) const { return solve_split_linear(g); }
    Equilibrium operator()(const PwlCommunalGame& g) const { return solve_pwl_communal(g, mode); }
    Equilibrium operator()(const SmoothCommunalGame& g) const { return solve_smooth(g); }
    Equilibrium operator()(const SmoothSplitGame& g) const { return solve_smooth(g); }
    Equilibrium operator()(const EyeballTransitGame& g) const { return solve_eyeball(g, mode); }
  };
  return std::visit(Visitor{mode}, s);
}

nlohmann::json to_json(const VerificationReport& r) {
  auto slope = [](const Slope& s) { return nlohmann::json{{"left", s.left}, {"right", s.right}}; };
  return {{"p1", r.candidate.p1},
          {"p2", r.candidate.p2},
          {"U1", r.payoffs.first},
          {"U2", r.payoffs.second},
          {"dU1_dp1", slope(r.gradient.first)},
          {"dU2_dp2", slope(r.gradient.second)},
          {"gain1", r.gain_first},
          {"gain2", r.gain_second},
          {"best_deviation_p1", r.best_deviation.p1},
          {"best_deviation_p2", r.best_deviation.p2},
          {"grid_step", r.grid_step},
          {"price_ceiling", r.price_ceiling},
          {"epsilon", r.epsilon},
          {"stationary", r.stationary},
          {"pass", r.passed}};
}

VerificationReport verify_nep(const Scenario& s, const PricePoint& candidate,
                              const VerifyOptions& options) {
  VerificationReport r;
  r.candidate = candidate;
  r.price_ceiling = price_ceiling(s);
  const GridSpec grid = default_grid(s, options.grid_step);
  r.grid_step = grid.step();
  r.payoffs = utilities(s, candidate);
  r.gradient = utility_gradient(s, candidate);

  double max_abs = std::max(std::abs(r.payoffs.first), std::abs(r.payoffs.second));
  double best1 = r.payoffs.first, best2 = r.payoffs.second;
  r.best_deviation = candidate;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.at(i);
    const double u1 = utilities(s, {x, candidate.p2}).first;
    const double u2 = utilities(s, {candidate.p1, x}).second;
    max_abs = std::max({max_abs, std::abs(u1), std::abs(u2)});
    if (u1 > best1) {
      best1 = u1;
      r.best_deviation.p1 = x;
    }
    if (u2 > best2) {
      best2 = u2;
      r.best_deviation.p2 = x;
    }
  }
  r.gain_first = best1 - r.payoffs.first;
  r.gain_second = best2 - r.payoffs.second;
  r.epsilon = options.epsilon.value_or(1e-6 * max_abs);
  if (!(r.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");

  auto stationary = [](const Slope& d) {
    return (std::abs(d.left) <= 1e-9 && std::abs(d.right) <= 1e-9) ||
           (d.left >= 0.0 && d.right <= 0.0);
  };
  r.stationary = stationary(r.gradient.first) && stationary(r.gradient.second);
  r.passed = r.gain_first <= r.epsilon && r.gain_second <= r.epsilon;
  return r;
}

}  // namespace ispgame
