#include "ispgame/demand.hpp"

#include <cmath>
#include <string>

#include "ispgame/errors.hpp"
#include "ispgame/format.hpp"

namespace ispgame {
namespace {

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ValidationError(std::string(name) + " must be finite and > 0, got " + fmt12(v));
  }
}

void require_price(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw ValidationError("price must be finite and >= 0, got " + fmt12(p));
  }
}

}  // namespace

LinearDemand::LinearDemand(double max_demand, double sensitivity)
    : max_demand_(max_demand), sensitivity_(sensitivity) {
  require_finite_positive(max_demand, "D_max");
  require_finite_positive(sensitivity, "d");
}

double LinearDemand::value(double p) const {
  require_price(p);
  const double v = max_demand_ - sensitivity_ * p;
  return v > 0.0 ? v : 0.0;
}

Slope LinearDemand::slope(double p) const {
  require_price(p);
  const double z = zero_price();
  if (p < z) return {-sensitivity_, -sensitivity_};
  if (p == z) return {-sensitivity_, 0.0};
  return {0.0, 0.0};
}

PwlConstants derive_pwl_constants(double max_demand, double threshold_demand,
                                  double max_sensitivity,
                                  double threshold_sensitivity) {
  require_finite_positive(max_demand, "D_max");
  require_finite_positive(threshold_demand, "D_theta");
  require_finite_positive(max_sensitivity, "d_max");
  require_finite_positive(threshold_sensitivity, "d_theta");
  if (threshold_demand >= max_demand) {
    throw ValidationError("PWL demand requires D_theta < D_max");
  }
  if (threshold_sensitivity >= max_sensitivity) {
    throw ValidationError("PWL demand requires d_theta < d_max");
  }
  PwlConstants c{};
  c.shifted_intercept =
      threshold_demand + (max_demand - threshold_demand) * threshold_sensitivity / max_sensitivity;
  c.threshold_price = (max_demand - threshold_demand) / max_sensitivity;
  c.max_price = c.shifted_intercept / threshold_sensitivity;
  return c;
}

PwlConvexDemand::PwlConvexDemand(double max_demand, double threshold_demand,
                                 double max_sensitivity, double threshold_sensitivity)
    : max_demand_(max_demand),
      threshold_demand_(threshold_demand),
      max_sensitivity_(max_sensitivity),
      threshold_sensitivity_(threshold_sensitivity) {
  const PwlConstants c = derive_pwl_constants(max_demand, threshold_demand,
                                              max_sensitivity, threshold_sensitivity);
  shifted_intercept_ = c.shifted_intercept;
  threshold_price_ = c.threshold_price;
  max_price_ = c.max_price;
}

double PwlConvexDemand::value(double p) const {
  require_price(p);
  // Exact D_theta at the kink rather than whichever line rounds higher.
  if (p == threshold_price_) return threshold_demand_;
  const double v = p < threshold_price_ ? steep_line(p) : shallow_line(p);
  return v > 0.0 ? v : 0.0;
}

Slope PwlConvexDemand::slope(double p) const {
  require_price(p);
  const double steep = -max_sensitivity_;
  const double shallow = -threshold_sensitivity_;
  if (p < threshold_price_) return {steep, steep};
  if (p == threshold_price_) return {steep, shallow};
  if (p < max_price_) return {shallow, shallow};
  if (p == max_price_) return {shallow, 0.0};
  return {0.0, 0.0};
}

SmoothConvexDemand::SmoothConvexDemand(double max_demand, double max_price, double exponent)
    : max_demand_(max_demand), max_price_(max_price), exponent_(exponent) {
  require_finite_positive(max_demand, "D_max");
  require_finite_positive(max_price, "p_max");
  if (!std::isfinite(exponent) || exponent < 1.0) {
    throw ValidationError("alpha must be finite and >= 1, got " + fmt12(exponent));
  }
}

double SmoothConvexDemand::value(double p) const {
  require_price(p);
  if (p >= max_price_) return 0.0;
  return max_demand_ * std::pow(1.0 - p / max_price_, exponent_);
}

Slope SmoothConvexDemand::slope(double p) const {
  require_price(p);
  if (p > max_price_) return {0.0, 0.0};
  const double u = p < max_price_ ? 1.0 - p / max_price_ : 0.0;
  const double d = -max_demand_ * exponent_ / max_price_ * std::pow(u, exponent_ - 1.0);
  if (p == max_price_) return {d, 0.0};
  return {d, d};
}

double eval_demand(const DemandModel& model, double p) {
  return std::visit([p](const auto& m) { return m.value(p); }, model);
}

Slope demand_slope(const DemandModel& model, double p) {
  return std::visit([p](const auto& m) { return m.slope(p); }, model);
}

double zero_demand_price(const DemandModel& model) {
  struct Visitor {
    double operator()(const LinearDemand& m) const { return m.zero_price(); }
    double operator()(const PwlConvexDemand& m) const { return m.max_price(); }
    double operator()(const SmoothConvexDemand& m) const { return m.max_price(); }
  };
  return std::visit(Visitor{}, model);
}

SmoothConvexDemand calibrate_smooth(double max_demand, double threshold_demand,
                                    double max_sensitivity,
                                    double threshold_sensitivity) {
  require_finite_positive(max_demand, "D_max");
  require_finite_positive(threshold_demand, "D_theta");
  require_finite_positive(max_sensitivity, "d_max");
  require_finite_positive(threshold_sensitivity, "d_theta");
  if (threshold_demand >= max_demand) {
    throw CalibrationInfeasible("calibration requires D_theta < D_max");
  }
  if (threshold_sensitivity >= max_sensitivity) {
    throw CalibrationInfeasible("calibration requires d_theta < d_max");
  }
  const double demand_ratio = threshold_demand / max_demand;
  const double slope_ratio = threshold_sensitivity / max_sensitivity;
  if (!(demand_ratio < slope_ratio)) {
    throw CalibrationInfeasible(
        "calibration requires D_theta/D_max < d_theta/d_max (got " + fmt12(demand_ratio) +
        " >= " + fmt12(slope_ratio) + ")");
  }

  // D'(0) = -D_max alpha / p_max and, at D = D_theta,
  // D' = -d_max (D_theta/D_max)^((alpha-1)/alpha).
  const double r = std::log(slope_ratio) / std::log(demand_ratio);
  const double alpha = 1.0 / (1.0 - r);
  const double p_max = alpha * max_demand / max_sensitivity;
  SmoothConvexDemand model(max_demand, p_max, alpha);

  const double p_theta = p_max * (1.0 - std::pow(demand_ratio, 1.0 / alpha));
  const double res0 = std::abs(model.slope(0.0).right + max_sensitivity) / max_sensitivity;
  const double res_theta =
      std::abs(model.slope(p_theta).right + threshold_sensitivity) / threshold_sensitivity;
  const double res_level = std::abs(model.value(p_theta) - threshold_demand) / threshold_demand;
  if (res0 > 1e-10 || res_theta > 1e-10 || res_level > 1e-10) {
    throw SolverFailure("smooth calibration residual too large: " + fmt12(res0) + ", " +
                        fmt12(res_theta) + ", " + fmt12(res_level));
  }
  return model;
}

}  // namespace ispgame
