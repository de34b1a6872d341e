#include <doctest.h>

#include <cmath>
#include <random>

#include "ispgame/demand.hpp"
#include "ispgame/errors.hpp"

using namespace ispgame;
using doctest::Approx;

namespace {

double central_difference(const DemandModel& m, double p, double h = 1e-6) {
  return (eval_demand(m, p + h) - eval_demand(m, p - h)) / (2.0 * h);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-3); }

}  // namespace

TEST_CASE("linear demand clamps at zero") {
  const LinearDemand d(1.0, 2.0);
  CHECK(d.value(0.0) == 1.0);
  CHECK(d.value(0.25) == Approx(0.5));
  CHECK(d.value(0.5) == 0.0);
  CHECK(d.value(3.0) == 0.0);
  CHECK(d.slope(0.1).left == -2.0);
  CHECK(d.slope(0.1).right == -2.0);
  // At the clamp point only the left side still moves.
  CHECK(d.slope(0.5).left == -2.0);
  CHECK(d.slope(0.5).right == 0.0);
  CHECK(d.slope(1.0).left == 0.0);
  CHECK_THROWS_AS(d.value(-0.1), ValidationError);
  CHECK_THROWS_AS(LinearDemand(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(LinearDemand(1.0, -1.0), ValidationError);
}

TEST_CASE("pwl demand values on the example-1 model") {
  const PwlConvexDemand d(1.0, 0.4, 1.0, 0.2);
  CHECK(d.value(0.0) == 1.0);
  CHECK(d.value(0.6) == Approx(0.4).epsilon(1e-15));
  CHECK(d.value(1.0) == Approx(0.32).epsilon(1e-15));
  CHECK(d.value(2.6) == 0.0);
  CHECK(d.value(5.0) == 0.0);

  const Slope below = d.slope(0.3);
  CHECK(below.left == -1.0);
  CHECK(below.right == -1.0);
  const Slope kink = d.slope(0.6);
  CHECK(kink.left == -1.0);
  CHECK(kink.right == Approx(-0.2));
  CHECK(d.slope(3.0).left == 0.0);
  CHECK(d.slope(3.0).right == 0.0);
}

TEST_CASE("pwl derived constants") {
  const PwlConstants a = derive_pwl_constants(1.0, 0.4, 1.0, 0.2);
  CHECK(a.shifted_intercept == Approx(0.52));
  CHECK(a.threshold_price == Approx(0.6));
  CHECK(a.max_price == Approx(2.6));

  const PwlConstants b = derive_pwl_constants(1.0, 0.25, 1.0, 0.2);
  CHECK(b.shifted_intercept == Approx(0.4));
  CHECK(b.threshold_price == Approx(0.75));
  CHECK(b.max_price == Approx(2.0));

  const PwlConstants c = derive_pwl_constants(1.0, 1.0 / 6.0, 1.0, 1.0 / 6.0);
  CHECK(c.threshold_price == Approx(5.0 / 6.0));

  CHECK_THROWS_AS(derive_pwl_constants(1.0, 1.0, 1.0, 0.2), ValidationError);
  CHECK_THROWS_AS(derive_pwl_constants(1.0, 0.4, 0.2, 0.2), ValidationError);
  CHECK_THROWS_AS(derive_pwl_constants(1.0, 0.4, 0.2, 0.5), ValidationError);
}

TEST_CASE("pwl continuity and convexity over random models") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const double dmax = 0.5 + u(rng);
    const PwlConvexDemand d(1.0, u(rng), dmax, dmax * u(rng));
    const double pt = d.threshold_price();
    CHECK(d.steep_line(pt) == Approx(d.threshold_demand()).epsilon(1e-12));
    CHECK(d.shallow_line(pt) == Approx(d.threshold_demand()).epsilon(1e-12));
    CHECK(d.value(pt) == d.threshold_demand());
    CHECK(d.max_price() == Approx(pt + d.threshold_demand() / d.threshold_sensitivity()));

    double previous = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 50; ++i) {
      const double p = d.max_price() * 1.2 * i / 50.0;
      CHECK(d.value(p) >= d.steep_line(p) - 1e-15);
      CHECK(d.value(p) >= d.shallow_line(p) - 1e-15);
      const Slope s = d.slope(p);
      CHECK(s.left <= s.right);
      CHECK(s.left >= previous);
      previous = s.right;
    }
  }
}

TEST_CASE("smooth demand") {
  const SmoothConvexDemand d(1.0, 1.0, 2.0);
  CHECK(d.value(0.5) == Approx(0.25));
  CHECK(d.value(1.0) == 0.0);
  CHECK(d.value(1.5) == 0.0);
  CHECK(d.slope(0.0).left == Approx(-2.0));
  CHECK(d.slope(0.0).right == Approx(-2.0));
  CHECK_THROWS_AS(SmoothConvexDemand(1.0, 1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(SmoothConvexDemand(1.0, 0.0, 2.0), ValidationError);

  // alpha = 1 is the linear model with d = D_max / p_max.
  const SmoothConvexDemand linear(2.0, 4.0, 1.0);
  const LinearDemand reference(2.0, 0.5);
  for (double p : {0.0, 0.7, 2.0, 3.9}) CHECK(linear.value(p) == Approx(reference.value(p)));
}

TEST_CASE("smooth slope matches finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> frac(0.02, 0.98);
  std::uniform_real_distribution<double> alpha(1.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const DemandModel m = SmoothConvexDemand(0.5 + frac(rng), 0.5 + 2.0 * frac(rng), alpha(rng));
    const auto& d = std::get<SmoothConvexDemand>(m);
    const double p = d.max_price() * frac(rng);
    CHECK(rel_err(demand_slope(m, p).right, central_difference(m, p)) < 1e-6);
  }
}

TEST_CASE("pwl and linear slopes match finite differences away from kinks") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> frac(0.02, 0.98);
  for (int i = 0; i < 100; ++i) {
    const double dmax = 0.5 + frac(rng);
    const DemandModel pwl = PwlConvexDemand(1.0, frac(rng), dmax, dmax * frac(rng));
    const auto& d = std::get<PwlConvexDemand>(pwl);
    double p = d.max_price() * frac(rng);
    if (std::abs(p - d.threshold_price()) < 1e-3) p += 2e-3;
    CHECK(rel_err(demand_slope(pwl, p).right, central_difference(pwl, p)) < 1e-6);

    const DemandModel lin = LinearDemand(0.5 + frac(rng), 0.5 + frac(rng));
    const double q = zero_demand_price(lin) * frac(rng);
    CHECK(rel_err(demand_slope(lin, q).right, central_difference(lin, q)) < 1e-6);
  }
}

TEST_CASE("smooth calibration") {
  const SmoothConvexDemand d = calibrate_smooth(1.0, 0.25, 1.0, 0.5);
  CHECK(d.exponent() == Approx(2.0).epsilon(1e-12));
  CHECK(d.max_price() == Approx(2.0).epsilon(1e-12));
  // Residual oracle for the two defining conditions.
  CHECK(std::abs(d.slope(0.0).right + 1.0) <= 1e-10);
  const double p_theta = d.max_price() * (1.0 - std::pow(0.25, 1.0 / d.exponent()));
  CHECK(std::abs(d.value(p_theta) - 0.25) <= 1e-10);
  CHECK(std::abs(d.slope(p_theta).right + 0.5) <= 1e-10);
  CHECK(d.value(d.max_price()) == 0.0);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double ratio = frac(rng);
    const double d_theta = 1.5 * (ratio + (1.0 - ratio) * frac(rng));
    const SmoothConvexDemand fit = calibrate_smooth(2.0, 2.0 * ratio, 1.5, d_theta);
    CHECK(fit.exponent() >= 1.0);
    CHECK(std::abs(fit.slope(0.0).right + 1.5) <= 1e-10 * 1.5);
  }
}

TEST_CASE("calibration infeasibility names the inequality") {
  CHECK_THROWS_AS(calibrate_smooth(1.0, 0.5, 1.0, 0.25), CalibrationInfeasible);
  CHECK_THROWS_AS(calibrate_smooth(1.0, 1.0, 1.0, 0.5), CalibrationInfeasible);
  CHECK_THROWS_AS(calibrate_smooth(1.0, 0.25, 1.0, 1.0), CalibrationInfeasible);
  try {
    calibrate_smooth(1.0, 0.5, 1.0, 0.25);
  } catch (const CalibrationInfeasible& e) {
    CHECK(std::string(e.what()).find("D_theta/D_max < d_theta/d_max") != std::string::npos);
  }
}
