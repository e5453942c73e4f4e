#include "deltacut/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Geometry>

#include "deltacut/errors.hpp"

namespace deltacut {
namespace {

constexpr double kHalfSqrt3 = std::numbers::sqrt3 / 2.0;

// cos/sin of (arm_index - 1) * 120 deg, exact for the three arms.
struct ArmRotation {
  double c;
  double s;
};

constexpr ArmRotation arm_rotation(int arm_index) {
  switch (arm_index) {
    case 2:
      return {-0.5, kHalfSqrt3};
    case 3:
      return {-0.5, -kHalfSqrt3};
    default:
      return {1.0, 0.0};
  }
}

void check_arm_index(int arm_index) {
  if (arm_index < 1 || arm_index > 3) {
    throw std::invalid_argument("arm index must be 1, 2 or 3");
  }
}

std::string unreachable_message(int arm, ArmFailure failure, const Pose& pose) {
  std::ostringstream os;
  os.precision(17);
  os << "Unreachable: arm " << arm << " (" << to_string(failure) << ") at pose (" << pose.x
     << ", " << pose.y << ", " << pose.z << ")";
  return os.str();
}

// Shifted knee centre in the base frame from the knee in the arm plane.
Eigen::Vector3d shifted_center(const RobotGeometry& geometry, int arm_index, double knee_y,
                               double knee_z) {
  const ArmRotation r = arm_rotation(arm_index);
  const double y = knee_y + geometry.effector_offset();
  return {-r.s * y, r.c * y, knee_z};
}

// Signed distance of the pose from the plane through the shifted knee centres,
// positive above (normal oriented toward +z). nullopt if the centres are
// collinear.
std::optional<double> height_above_knee_plane(const std::array<Eigen::Vector3d, 3>& centers,
                                              const Eigen::Vector3d& point) {
  const Eigen::Vector3d u = centers[1] - centers[0];
  const Eigen::Vector3d v = centers[2] - centers[0];
  Eigen::Vector3d n = u.cross(v);
  const double norm = n.norm();
  if (norm <= kSingularTolerance * u.norm() * v.norm() || norm == 0.0) return std::nullopt;
  if (n.z() < 0.0) n = -n;
  return n.dot(point - centers[0]) / norm;
}

}  // namespace

const char* to_string(ArmFailure failure) {
  switch (failure) {
    case ArmFailure::kNone:
      return "none";
    case ArmFailure::kSphereMissesArmPlane:
      return "forearm sphere misses the arm plane";
    case ArmFailure::kCirclesDisjoint:
      return "upper-arm and forearm circles do not intersect";
    case ArmFailure::kOutsideJointRange:
      return "outward knee outside joint range";
  }
  return "unknown";
}

Pose rotate_z(const Pose& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
}

std::optional<ArmSolution> try_solve_arm_angle(const RobotGeometry& geometry, const Pose& pose,
                                               int arm_index, ArmFailure* failure) {
  check_arm_index(arm_index);
  const auto fail = [&](ArmFailure why) -> std::optional<ArmSolution> {
    if (failure) *failure = why;
    return std::nullopt;
  };

  // Rotate by -(arm_index - 1) * 120 deg into the arm frame.
  const ArmRotation r = arm_rotation(arm_index);
  const double x = r.c * pose.x + r.s * pose.y;
  const double y = -r.s * pose.x + r.c * pose.y;
  const double z = pose.z;

  const double re = geometry.re();
  const double rf = geometry.rf();
  const double tol = kTangencyTolerance * re * re;

  double rho2 = re * re - x * x;
  if (rho2 < -tol) return fail(ArmFailure::kSphereMissesArmPlane);
  rho2 = std::max(rho2, 0.0);

  // Upper-arm circle about F = (-a, 0); forearm circle about E1' = (y - b, z).
  const double fy = -geometry.base_offset();
  const double dy = (y - geometry.effector_offset()) - fy;
  const double dz = z;
  const double d = std::hypot(dy, dz);
  if (d == 0.0) return fail(ArmFailure::kCirclesDisjoint);

  const double along = (rf * rf - rho2 + d * d) / (2.0 * d);
  const double h2 = rf * rf - along * along;
  if (h2 < -tol) return fail(ArmFailure::kCirclesDisjoint);
  const double h = std::sqrt(std::max(h2, 0.0));

  const double ux = dy / d;
  const double uz = dz / d;
  const double py = fy + along * ux;
  const double pz = along * uz;
  const Knee first{py - h * uz, pz + h * ux};
  const Knee second{py + h * uz, pz - h * ux};
  const Knee knee = first.y <= second.y ? first : second;

  const double theta = std::atan2(-knee.z, -(knee.y - fy));
  if (!in_canonical_range(theta)) return fail(ArmFailure::kOutsideJointRange);

  if (failure) *failure = ArmFailure::kNone;
  return ArmSolution{arm_index, theta, knee};
}

ArmSolution solve_arm_angle(const RobotGeometry& geometry, const Pose& pose, int arm_index) {
  ArmFailure why = ArmFailure::kNone;
  if (auto solution = try_solve_arm_angle(geometry, pose, arm_index, &why)) return *solution;
  throw UnreachableError(arm_index, unreachable_message(arm_index, why, pose));
}

namespace {

// Shared by the throwing and non-throwing IK. Returns the failing arm (0 for
// the folded assembly) through `failed_arm`.
std::optional<JointAngles> solve_all_arms(const RobotGeometry& geometry, const Pose& pose,
                                          int* failed_arm, ArmFailure* failure) {
  // Forward kinematics only ever returns z < 0.
  if (!(pose.z < 0.0)) {
    if (failed_arm) *failed_arm = 0;
    return std::nullopt;
  }
  std::array<ArmSolution, 3> arms;
  for (int i = 1; i <= 3; ++i) {
    auto solution = try_solve_arm_angle(geometry, pose, i, failure);
    if (!solution) {
      if (failed_arm) *failed_arm = i;
      return std::nullopt;
    }
    arms[i - 1] = *solution;
  }

  const std::array<Eigen::Vector3d, 3> centers = {
      shifted_center(geometry, 1, arms[0].knee.y, arms[0].knee.z),
      shifted_center(geometry, 2, arms[1].knee.y, arms[1].knee.z),
      shifted_center(geometry, 3, arms[2].knee.y, arms[2].knee.z),
  };
  const auto height = height_above_knee_plane(centers, {pose.x, pose.y, pose.z});
  if (height && *height > kGeometricTolerance) {
    if (failed_arm) *failed_arm = 0;
    return std::nullopt;
  }
  return JointAngles{arms[0].theta, arms[1].theta, arms[2].theta};
}

}  // namespace

std::optional<JointAngles> try_inverse_kinematics(const RobotGeometry& geometry,
                                                  const Pose& pose) {
  if (!pose.finite()) return std::nullopt;
  return solve_all_arms(geometry, pose, nullptr, nullptr);
}

JointAngles inverse_kinematics(const RobotGeometry& geometry, const Pose& pose) {
  if (!pose.finite()) throw InputError("inverse kinematics: pose must be finite");
  int arm = 0;
  ArmFailure why = ArmFailure::kNone;
  if (auto joints = solve_all_arms(geometry, pose, &arm, &why)) return *joints;
  if (arm == 0) {
    std::ostringstream os;
    os.precision(17);
    os << "Unreachable: pose (" << pose.x << ", " << pose.y << ", " << pose.z << ") lies "
       << (pose.z < 0.0 ? "above the knee plane (folded assembly)" : "on or above the base plane");
    throw UnreachableError(0, os.str());
  }
  throw UnreachableError(arm, unreachable_message(arm, why, pose));
}

bool is_reachable(const RobotGeometry& geometry, const Pose& pose) {
  return try_inverse_kinematics(geometry, pose).has_value();
}

std::array<Eigen::Vector3d, 3> shifted_knee_centers(const RobotGeometry& geometry,
                                                    const JointAngles& joints) {
  std::array<Eigen::Vector3d, 3> centers;
  for (int i = 1; i <= 3; ++i) {
    const double theta = joints[i];
    const double knee_y = -geometry.base_offset() - geometry.rf() * std::cos(theta);
    const double knee_z = -geometry.rf() * std::sin(theta);
    centers[i - 1] = shifted_center(geometry, i, knee_y, knee_z);
  }
  return centers;
}

Pose forward_kinematics(const RobotGeometry& geometry, const JointAngles& joints) {
  for (int i = 1; i <= 3; ++i) {
    if (!std::isfinite(joints[i]) || !in_canonical_range(joints[i])) {
      throw InvalidJointAngles("forward kinematics: theta" + std::to_string(i) +
                               " outside (-pi/2, pi)");
    }
  }
  const auto centers = shifted_knee_centers(geometry, joints);

  // Work relative to the first centre. Subtracting sphere 1 from spheres 2
  // and 3 gives the planes q2.X = |q2|^2/2 and q3.X = |q3|^2/2.
  const Eigen::Vector3d q2 = centers[1] - centers[0];
  const Eigen::Vector3d q3 = centers[2] - centers[0];
  const Eigen::Vector3d dir = q2.cross(q3);
  const double dir_norm = dir.norm();
  // Compare against the arm length too, so centres that coincide up to
  // rounding do not pass as a well-conditioned triangle.
  const double reach = geometry.rf() + geometry.re();
  if (dir_norm <= kSingularTolerance * std::max(q2.norm() * q3.norm(), reach * reach)) {
    throw SingularError("forward kinematics: shifted knee centres are collinear");
  }

  const double d2 = 0.5 * q2.squaredNorm();
  const double d3 = 0.5 * q3.squaredNorm();
  const Eigen::Vector3d on_line = (d2 * q3.cross(dir) + d3 * dir.cross(q2)) / dir.squaredNorm();
  const Eigen::Vector3d unit = dir / dir_norm;

  const double re = geometry.re();
  const double half_b = unit.dot(on_line);
  const double c = on_line.squaredNorm() - re * re;
  const double disc = half_b * half_b - c;
  if (disc < -kTangencyTolerance * re * re) {
    throw NoSolutionError("forward kinematics: forearm spheres have no common point");
  }
  const double root = std::sqrt(std::max(disc, 0.0));

  const Eigen::Vector3d upper = on_line + (-half_b + root) * unit;
  const Eigen::Vector3d lower = on_line + (-half_b - root) * unit;
  const Eigen::Vector3d chosen = (upper.z() < lower.z() ? upper : lower) + centers[0];

  if (!(chosen.z() < 0.0)) {
    throw NoSolutionError("forward kinematics: effector would sit above the base plane");
  }
  return {chosen.x(), chosen.y(), chosen.z()};
}

}  // namespace deltacut
