#include <doctest.h>

#include <random>
#include <sstream>

#include "ispgame/analysis.hpp"
#include "ispgame/errors.hpp"
#include "ispgame/oracle.hpp"
#include "support.hpp"

using namespace ispgame;
using namespace ispgame::testing;
using doctest::Approx;

namespace {

Scenario split(double m1, double d1, double m2, double d2, Factoring f) {
  return SplitLinearGame{{LinearDemand(m1, d1), LinearDemand(m2, d2)}, f, 0.0};
}

}  // namespace

TEST_CASE("communal demand never profits from side payments") {
  const ProfitabilityReport r = profitability_report(CommunalLinearGame{LinearDemand(1.0, 1.0), 0.0});
  CHECK(r.analytic_derivative == 0.0);
  CHECK(std::abs(r.numeric_derivative) < 1e-8);
  CHECK_FALSE(r.profitable);
  CHECK(r.consistent);

  const ProfitabilityReport smooth =
      profitability_report(SmoothCommunalGame{SmoothConvexDemand(1.0, 1.0, 2.0), 0.0});
  CHECK_FALSE(smooth.profitable);
  CHECK(std::abs(smooth.numeric_derivative) < 1e-8);
}

TEST_CASE("bandwidth factoring: derived verdict disagrees with the printed condition") {
  const ProfitabilityReport r =
      profitability_report(split(1.0, 1.0, 1.6, 2.0, Factoring::bandwidth));
  CHECK(std::abs(r.analytic_derivative - 2.0 / 15.0) <= 1e-9);
  CHECK(std::abs(r.numeric_derivative - r.analytic_derivative) / r.analytic_derivative < 1e-4);
  CHECK(r.profitable);
  CHECK(r.derived_condition_verdict);
  CHECK_FALSE(r.printed_condition_verdict);
  CHECK_FALSE(r.consistent);

  const ProfitabilityReport flat =
      profitability_report(split(1.0, 1.0, 1.6, 1.0, Factoring::bandwidth));
  CHECK(flat.analytic_derivative == 0.0);
  CHECK_FALSE(flat.profitable);
}

TEST_CASE("printed split condition") {
  CHECK(printed_split_condition(1.6, 0.5));   // min{3.2, 1} > 0.5
  CHECK_FALSE(printed_split_condition(1.6, 2.0));
  CHECK(printed_split_condition(0.2, 3.0));   // max{0.4, 1} < 3
  CHECK_FALSE(printed_split_condition(0.5, 1.0));
}

TEST_CASE("content factoring report") {
  const Scenario s = split(1.0, 1.0, 1.6, 2.0, Factoring::content);
  const ProfitabilityReport r = profitability_report(s);
  CHECK(std::abs(r.numeric_derivative - r.analytic_derivative) <
        1e-4 * std::max(1.0, std::abs(r.analytic_derivative)));
  REQUIRE(r.cp_analytic_derivative);
  REQUIRE(r.cp_numeric_derivative);
  REQUIRE(r.cp_printed_verdict);
  CHECK(std::abs(*r.cp_numeric_derivative - *r.cp_analytic_derivative) < 1e-6);
  CHECK(*r.cp_numeric_derivative ==
        Approx(numeric_profit_derivative(s, std::nullopt, Player::second)));
  CHECK(r.printed_condition_verdict == !*r.cp_printed_verdict);
}

TEST_CASE("analytic and numeric derivatives agree in sign") {
  std::mt19937 rng(61);
  int checked = 0;
  for (int i = 0; i < 600 && checked < 60; ++i) {
    const ScenarioKind kind = i % 3 == 0   ? ScenarioKind::split_linear_bandwidth
                              : i % 3 == 1 ? ScenarioKind::split_linear_content
                                           : ScenarioKind::smooth_split;
    const Scenario s = with_side_payment(random_scenario(kind, rng), 0.0);
    ProfitabilityReport r;
    try {
      r = profitability_report(s);
    } catch (const SolverFailure&) {
      continue;
    }
    ++checked;
    CAPTURE(to_string(kind));
    CHECK(std::abs(r.analytic_derivative - r.numeric_derivative) /
              std::max(1.0, std::abs(r.analytic_derivative)) <
          1e-4);
    const bool both_zero = std::abs(r.analytic_derivative) < 1e-8 && std::abs(r.numeric_derivative) < 1e-8;
    CHECK((both_zero || (r.analytic_derivative > 0) == (r.numeric_derivative > 0)));
    CHECK(r.derived_condition_verdict == (r.analytic_derivative > kProfitTolerance));
  }
  CHECK(checked == 60);
}

TEST_CASE("printed bandwidth condition disagreements are counted") {
  std::mt19937 rng(62);
  int draws = 0, disagreements = 0;
  while (draws < 100) {
    const Scenario s = with_side_payment(random_scenario(ScenarioKind::split_linear_bandwidth, rng), 0.0);
    ProfitabilityReport r;
    try {
      r = profitability_report(s);
    } catch (const SolverFailure&) {
      continue;
    }
    ++draws;
    CHECK(r.derived_condition_verdict == (r.analytic_derivative > kProfitTolerance));
    if (r.printed_condition_verdict != r.derived_condition_verdict) ++disagreements;
  }
  MESSAGE("printed vs derived disagreements: " << disagreements << " of 100");
  CHECK(disagreements > 0);
}

TEST_CASE("smooth split verdict follows D_max_2 > D_max_1") {
  const ProfitabilityReport up = profitability_report(SmoothSplitGame(1.0, 2.0, 1.0, 2.0, 0.0));
  CHECK(std::abs(up.analytic_derivative - 0.09375) <= 1e-9);
  CHECK(up.numeric_derivative > 0.0);
  CHECK(up.profitable);
  CHECK(up.consistent);

  const ProfitabilityReport down = profitability_report(SmoothSplitGame(1.0, 0.5, 1.0, 2.0, 0.0));
  CHECK(down.analytic_derivative < 0.0);
  CHECK(down.numeric_derivative < 0.0);
  CHECK_FALSE(down.profitable);
}

TEST_CASE("profitability errors") {
  CHECK_THROWS_AS(profitability_report(EyeballTransitGame(1.0, 0.5, 1.0, 1.0, 0.8, 0.4, 0.2)),
                  ValidationError);
  CHECK_THROWS_AS(profitability_report(split(1.0, 1.0, 1.0, 0.5, Factoring::bandwidth)),
                  SolverFailure);
}

TEST_CASE("transit case report on the worked example") {
  const TransitCaseReport r = transit_case_report(EyeballTransitGame(1.0, 0.5, 1.0, 1.0, 0.8, 0.4, 0.2));
  CHECK(r.delta == Approx(0.5));
  CHECK(r.phi == Approx(0.5));
  CHECK(r.transit_ratio == Approx(0.2));
  CHECK(r.case_a.derived.case_holds);
  CHECK(r.case_a.derived.prices.p1 == Approx(0.54));
  CHECK(r.case_a.printed.prices.p1 == Approx(0.52));
  CHECK(r.case_a.derived_bound_satisfied);
  CHECK(r.consistent_case == "both");
  CHECK_FALSE(r.case_a.printed_requirement);
  CHECK_FALSE(r.case_b.printed_requirement);
}

TEST_CASE("transit case report: requirement flags and balanced flow") {
  // delta = 0.5, phi = 0.6
  const TransitCaseReport b = transit_case_report(EyeballTransitGame(1.0, 0.5, 1.0, 1.0, 0.5, 0.3, 0.2));
  CHECK(b.phi == Approx(0.6));
  CHECK(b.case_b.printed_requirement);
  CHECK_FALSE(b.case_a.printed_requirement);

  const TransitCaseReport tie = transit_case_report(EyeballTransitGame(1.0, 0.5, 1.0, 1.0, 0.8, 0.4, 0.0));
  CHECK(tie.consistent_case == "balanced");
}

TEST_CASE("derived transit bound is equivalent to the case inequality") {
  std::mt19937 rng(63);
  int checked = 0;
  for (int i = 0; i < 2000 && checked < 200; ++i) {
    const Scenario s = random_scenario(ScenarioKind::eyeball_transit, rng);
    const TransitCaseReport r = transit_case_report(std::get<EyeballTransitGame>(s));
    for (const TransitCase* c : {&r.case_a, &r.case_b}) {
      if (!c->derived.interior) continue;
      // Skip draws within rounding distance of the boundary.
      if (std::abs(r.transit_ratio - c->derived_bound) < 1e-9) continue;
      ++checked;
      CHECK(c->derived_bound_satisfied == c->derived.case_holds);
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("sweeps") {
  const Scenario thm1 = CommunalLinearGame{LinearDemand(1.0, 1.0), 0.0};
  const auto rows = sweep(thm1, "p_s", -0.3, 0.3, 0.05);
  REQUIRE(rows.size() == 13);
  for (const auto& r : rows) {
    CHECK(r.type == "point");
    CHECK(std::abs(r.u1 - 1.0 / 9.0) <= 1e-12);
  }

  const Scenario ex3 = PwlCommunalGame{PwlConvexDemand(1.0, 0.25, 1.0, 0.2), 0.125};
  const auto seg = sweep(ex3, "p_s", 0.0, 0.45, 0.05, FormulaMode::as_printed);
  REQUIRE(seg.size() == 10);
  for (const auto& r : seg) CHECK(r.type == "segment");

  CHECK(sweep(thm1, "d", 2.0, 2.0, 0.1).size() == 1);
  CHECK_THROWS_AS(sweep(thm1, "q", 0.0, 1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(sweep(thm1, "p_s", 0.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(sweep(thm1, "p_s", 1.0, 0.0, 0.1), ValidationError);

  const auto invalid = sweep(thm1, "d", -0.1, 0.0, 0.1);
  REQUIRE(invalid.size() == 2);
  CHECK(invalid[0].type == "none");
}

TEST_CASE("sweep csv") {
  const Scenario thm1 = CommunalLinearGame{LinearDemand(1.0, 1.0), 0.0};
  std::ostringstream os;
  write_sweep_csv(os, "p_s", sweep(thm1, "p_s", 0.3, 0.35, 0.05));
  std::istringstream lines(os.str());
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header == "p_s,p1,p2,U1,U2,type,detail");
  CHECK(first == "0.3,0.0333333333333,0.633333333333,0.111111111111,0.111111111111,point,interior");
  CHECK(second.rfind("0.35,,,,,none,\"|p_s| >= D_max/(3d)", 0) == 0);
}
