#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace deltacut {

/// Position of the effector centre E0 in the base frame (mm). Origin at the
/// base-triangle centroid, z up, so every working pose has z < 0.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Pose&) const = default;
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// Actuator angles (rad). 0 = upper arm horizontal, positive = knee below
/// the base plane. Canonical range is (-pi/2, pi).
struct JointAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  bool operator==(const JointAngles&) const = default;

  /// arm is 1-based.
  double operator[](int arm) const {
    return arm == 1 ? theta1 : arm == 2 ? theta2 : theta3;
  }
  bool finite() const {
    return std::isfinite(theta1) && std::isfinite(theta2) && std::isfinite(theta3);
  }
};

inline constexpr double kJointMin = -std::numbers::pi / 2.0;
inline constexpr double kJointMax = std::numbers::pi;

inline bool in_canonical_range(double theta) {
  return theta > kJointMin && theta < kJointMax;
}

/// Sizing of the mechanism: base triangle side f, effector triangle side e,
/// upper arm r_f and parallelogram forearm r_e, all in mm.
///
/// Construction enforces positivity and the home-pose assembly condition
/// r_e > |a + r_f - b|, where a and b are the triangle inradii.
class RobotGeometry {
 public:
  RobotGeometry(double f, double e, double rf, double re);

  /// Returns a description of the first violated invariant, or nullopt.
  static std::optional<std::string> check(double f, double e, double rf, double re);

  double f() const { return f_; }
  double e() const { return e_; }
  double rf() const { return rf_; }
  double re() const { return re_; }

  /// Distance from the base centroid to an actuator axis, f / (2 sqrt 3).
  double base_offset() const { return f_ / (2.0 * std::numbers::sqrt3); }
  /// Distance from the effector centre to a forearm joint, e / (2 sqrt 3).
  double effector_offset() const { return e_ / (2.0 * std::numbers::sqrt3); }

  /// z of the effector with all three arms horizontal.
  double home_z() const;

  RobotGeometry scaled(double s) const { return {f_ * s, e_ * s, rf_ * s, re_ * s}; }

  bool operator==(const RobotGeometry&) const = default;

 private:
  double f_;
  double e_;
  double rf_;
  double re_;
};

}  // namespace deltacut
