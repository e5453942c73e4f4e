#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

#include "deltacut/geometry.hpp"

namespace deltacut {

/// Knee J in the arm's own YZ plane (mm).
struct Knee {
  double y = 0.0;
  double z = 0.0;
};

struct ArmSolution {
  int arm_index = 1;
  double theta = 0.0;
  Knee knee;
};

enum class ArmFailure {
  kNone,
  kSphereMissesArmPlane,  // r_e^2 - x'^2 < 0
  kCirclesDisjoint,       // the two circles in the arm plane do not meet
  kOutsideJointRange,     // outward knee implies theta outside (-pi/2, pi)
};

const char* to_string(ArmFailure failure);

/// Residual tolerance for geometric checks (mm).
inline constexpr double kGeometricTolerance = 1e-9;
/// Relative rank tolerance for the forward solver.
inline constexpr double kSingularTolerance = 1e-12;
/// Tangency band, relative to r_e^2.
inline constexpr double kTangencyTolerance = 1e-12;

/// Rotation about +z.
Pose rotate_z(const Pose& p, double angle);

/// Angle of the one actuated arm that moves the effector to `pose`.
/// The pose is rotated by -(arm_index - 1) * 120 deg into the arm's frame,
/// the forearm sphere about E1 is cut with the arm plane, and the outward
/// (smaller y) intersection with the upper-arm circle is the knee.
/// Throws UnreachableError.
ArmSolution solve_arm_angle(const RobotGeometry& geometry, const Pose& pose, int arm_index);

/// Non-throwing form; `failure` is set when nullopt is returned.
std::optional<ArmSolution> try_solve_arm_angle(const RobotGeometry& geometry, const Pose& pose,
                                               int arm_index, ArmFailure* failure = nullptr);

/// Throws UnreachableError naming the first arm that fails. A pose whose three
/// arms all solve but which lies above the plane of the shifted knees needs
/// the folded assembly and is reported with arm 0.
JointAngles inverse_kinematics(const RobotGeometry& geometry, const Pose& pose);

std::optional<JointAngles> try_inverse_kinematics(const RobotGeometry& geometry, const Pose& pose);

bool is_reachable(const RobotGeometry& geometry, const Pose& pose);

/// Knee centres moved toward the axis by the effector offset; the effector
/// centre lies at distance r_e from all three.
std::array<Eigen::Vector3d, 3> shifted_knee_centers(const RobotGeometry& geometry,
                                                    const JointAngles& joints);

/// Three-sphere intersection, lower root. Throws InvalidJointAngles,
/// NoSolutionError or SingularError.
Pose forward_kinematics(const RobotGeometry& geometry, const JointAngles& joints);

}  // namespace deltacut
