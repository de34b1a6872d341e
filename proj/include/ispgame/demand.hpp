#pragma once

#include <variant>

namespace ispgame {

// One-sided derivatives of a piecewise-smooth function at a point.
struct Slope {
  double left = 0.0;
  double right = 0.0;

  bool smooth() const { return left == right; }
};

// D(p) = max{D_max - d p, 0}.
class LinearDemand {
 public:
  LinearDemand(double max_demand, double sensitivity);

  double max_demand() const { return max_demand_; }
  double sensitivity() const { return sensitivity_; }
  // Price at which demand reaches zero, D_max / d.
  double zero_price() const { return max_demand_ / sensitivity_; }

  double value(double p) const;
  Slope slope(double p) const;

 private:
  double max_demand_;
  double sensitivity_;
};

// Two provider-specific linear demands coupled through the total price.
struct SplitLinearDemand {
  LinearDemand first;   // access (ISP) demand
  LinearDemand second;  // content (CP) demand

  // delta_k = D_max,k / d_k
  double first_ratio() const { return first.zero_price(); }
  double second_ratio() const { return second.zero_price(); }
};

// Convex piecewise-linear demand
//   D(p) = max{D_max - d_max p, D_hat - d_theta p, 0}
// with high sensitivity d_max below the threshold price p_theta and low
// sensitivity d_theta above it.
class PwlConvexDemand {
 public:
  PwlConvexDemand(double max_demand, double threshold_demand,
                  double max_sensitivity, double threshold_sensitivity);

  double max_demand() const { return max_demand_; }
  double threshold_demand() const { return threshold_demand_; }
  double max_sensitivity() const { return max_sensitivity_; }
  double threshold_sensitivity() const { return threshold_sensitivity_; }

  double shifted_intercept() const { return shifted_intercept_; }  // D_hat
  double threshold_price() const { return threshold_price_; }      // p_theta
  double max_price() const { return max_price_; }                  // p_max

  // The two lines before clamping; equal at p_theta.
  double steep_line(double p) const { return max_demand_ - max_sensitivity_ * p; }
  double shallow_line(double p) const {
    return shifted_intercept_ - threshold_sensitivity_ * p;
  }

  double value(double p) const;
  Slope slope(double p) const;

 private:
  double max_demand_;
  double threshold_demand_;
  double max_sensitivity_;
  double threshold_sensitivity_;
  double shifted_intercept_;
  double threshold_price_;
  double max_price_;
};

// D(p) = D_max (1 - p/p_max)^alpha on [0, p_max], zero beyond.
class SmoothConvexDemand {
 public:
  SmoothConvexDemand(double max_demand, double max_price, double exponent);

  double max_demand() const { return max_demand_; }
  double max_price() const { return max_price_; }
  double exponent() const { return exponent_; }

  double value(double p) const;
  Slope slope(double p) const;

 private:
  double max_demand_;
  double max_price_;
  double exponent_;
};

using DemandModel = std::variant<LinearDemand, PwlConvexDemand, SmoothConvexDemand>;

double eval_demand(const DemandModel& model, double p);
Slope demand_slope(const DemandModel& model, double p);
double zero_demand_price(const DemandModel& model);

struct PwlConstants {
  double shifted_intercept;  // D_hat_theta
  double threshold_price;    // p_theta
  double max_price;          // p_max
};

PwlConstants derive_pwl_constants(double max_demand, double threshold_demand,
                                  double max_sensitivity,
                                  double threshold_sensitivity);

// Fits (alpha, p_max) so that D'(0) = -d_max and D' = -d_theta where
// D = D_theta. Requires D_theta/D_max < d_theta/d_max.
SmoothConvexDemand calibrate_smooth(double max_demand, double threshold_demand,
                                    double max_sensitivity,
                                    double threshold_sensitivity);

}  // namespace ispgame
