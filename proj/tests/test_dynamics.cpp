#include <doctest.h>

#include <random>
#include <sstream>

#include "ispgame/dynamics.hpp"
#include "ispgame/equilibrium.hpp"
#include "ispgame/errors.hpp"
#include "support.hpp"

using namespace ispgame;
using namespace ispgame::testing;
using doctest::Approx;

namespace {

const Scenario kThm1 = CommunalLinearGame{LinearDemand(1.0, 1.0), 0.0};
const Scenario kExample3 = PwlCommunalGame{PwlConvexDemand(1.0, 0.25, 1.0, 0.2), 0.125};

bool vanishes(const Slope& s) { return s.left >= -1e-12 && s.right <= 1e-12; }

}  // namespace

TEST_CASE("mode names") {
  CHECK(parse_dynamics_mode("br") == DynamicsMode::best_response_relaxation);
  CHECK(parse_dynamics_mode(to_string(DynamicsMode::printed)) == DynamicsMode::printed);
  CHECK_THROWS_AS(parse_dynamics_mode("newton"), ValidationError);
}

TEST_CASE("continuous best response") {
  CHECK(continuous_best_response(kThm1, Player::first, 1.0 / 3.0) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(continuous_best_response(kThm1, Player::second, 0.0) == Approx(0.5).epsilon(1e-12));
  // Example 3 against p2 = 0.45: the shallow-branch peak beats the steep one.
  const double br = continuous_best_response(kExample3, Player::first, 0.45);
  const double shallow = (0.4 / 0.2 - 0.45 - 0.125) / 2.0;
  CHECK(br == Approx(shallow).epsilon(1e-10));
}

TEST_CASE("gradient play rests at the communal equilibrium") {
  const Trajectory t = integrate(kThm1, {1.0 / 3.0, 1.0 / 3.0}, DynamicsMode::gradient, 0.01, 10.0);
  CHECK(t.points.size() == 2);
  CHECK(t.terminal().p1 == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("printed dynamics move away from the equilibrium") {
  // Rest points of dp/dt = dU/dp - p satisfy dU/dp = p, not dU/dp = 0.
  const Trajectory t = integrate(kThm1, {1.0 / 3.0, 1.0 / 3.0}, DynamicsMode::printed, 0.01, 50.0);
  CHECK(t.points.size() > 2);
  CHECK(std::abs(t.terminal().p1 - 1.0 / 3.0) > 1e-3);
  const Gradient g = utility_gradient(kThm1, t.terminal());
  CHECK(g.first.right == Approx(t.terminal().p1).epsilon(1e-6));
}

TEST_CASE("best-response relaxation on pwl example 3 reaches the true equilibrium") {
  const Trajectory t = integrate(kExample3, {0.6, 0.6}, DynamicsMode::best_response_relaxation,
                                 0.01, 200.0);
  CHECK(t.terminal().p1 == Approx(13.0 / 24.0).epsilon(1e-6));
  CHECK(t.terminal().p2 == Approx(19.0 / 24.0).epsilon(1e-6));
  // The price sum settles at 4/3, well away from the threshold 0.75.
  CHECK(std::abs(t.terminal().sum() - 0.75) > 0.5);
  CHECK(verify_nep(kExample3, t.terminal(), {1e-3, 1e-5}).passed);
}

TEST_CASE("trajectories are deterministic and time is increasing") {
  const Trajectory a = integrate(kExample3, {0.2, 0.9}, DynamicsMode::gradient, 0.05, 20.0);
  const Trajectory b = integrate(kExample3, {0.2, 0.9}, DynamicsMode::gradient, 0.05, 20.0);
  CHECK(a.points == b.points);
  for (std::size_t i = 1; i < a.times.size(); ++i) CHECK(a.times[i] > a.times[i - 1]);
  for (const auto& p : a.points) CHECK((p.p1 >= 0.0 && p.p2 >= 0.0));
}

TEST_CASE("integrate validates its inputs") {
  CHECK_THROWS_AS(integrate(kThm1, {0.3, 0.3}, DynamicsMode::gradient, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(integrate(kThm1, {0.3, 0.3}, DynamicsMode::gradient, 0.1, 0.05), ValidationError);
  CHECK_THROWS_AS(integrate(kThm1, {1.5, 0.3}, DynamicsMode::gradient, 0.1, 1.0), ValidationError);
}

TEST_CASE("vector field sampling") {
  const VectorField corners = sample_field(kThm1, 0.0, 1.0, 2);
  REQUIRE(corners.nodes.size() == 4);
  CHECK(corners.nodes[1].at == PricePoint{0.0, 1.0});
  CHECK(corners.nodes[2].at == PricePoint{1.0, 0.0});

  const VectorField quarter = sample_field(kThm1, 0.0, 1.0, 4);
  const FieldNode& centre = quarter.nodes[1 * 4 + 1];
  CHECK(centre.at == PricePoint{1.0 / 3.0, 1.0 / 3.0});
  CHECK(std::abs(centre.gradient.first.right) <= 1e-12);
  CHECK(std::abs(centre.gradient.second.right) <= 1e-12);

  CHECK_THROWS_AS(sample_field(kThm1, 0.0, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(sample_field(kThm1, 1.0, 0.5, 3), ValidationError);
}

TEST_CASE("pwl example 3 field: nothing vanishes on the threshold line") {
  const VectorField f = sample_field(kExample3, 0.0, 1.0, 21);
  REQUIRE(f.nodes.size() == 441);
  const VectorField again = sample_field(kExample3, 0.0, 1.0, 21);
  for (std::size_t n = 0; n < f.nodes.size(); ++n) {
    const FieldNode& node = f.nodes[n];
    CHECK(node.at == again.nodes[n].at);
    CHECK(node.gradient.first.right == again.nodes[n].gradient.first.right);
    const Gradient exact = utility_gradient(kExample3, node.at);
    CHECK(node.gradient.first.right == exact.first.right);
    CHECK(node.gradient.second.right == exact.second.right);
    CHECK_FALSE((vanishes(node.gradient.first) && vanishes(node.gradient.second)));

    // Nodes with p1 + p2 = 0.75 and p1 in (0.125, 0.375) sit on a convex
    // kink: the own-price partial jumps from negative to positive.
    const bool on_locus = std::abs(node.at.sum() - 0.75) < 1e-9 && node.at.p1 > 0.125 &&
                          node.at.p1 < 0.375;
    if (on_locus) {
      CHECK(node.gradient.first.left < 0.0);
      CHECK(node.gradient.first.right > 0.0);
    }
  }
}

TEST_CASE("csv writers") {
  const Trajectory t = integrate(kThm1, {0.5, 0.5}, DynamicsMode::gradient, 0.5, 1.0);
  std::ostringstream traj;
  write_trajectory_csv(traj, t);
  const std::string text = traj.str();
  CHECK(text.rfind("t,p1,p2,U1,U2\n0,0.5,0.5,0,0\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);

  std::ostringstream field;
  write_field_csv(field, sample_field(kThm1, 0.0, 1.0, 4));
  CHECK(field.str().rfind("p1,p2,dU1_dp1,dU2_dp2\n", 0) == 0);
  CHECK(field.str().find("0.333333333333,0.333333333333,") != std::string::npos);
}
