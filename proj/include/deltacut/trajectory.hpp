#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deltacut/geometry.hpp"

namespace deltacut {

/// Cartesian path limits. Defaults: 60 m/min, 23 m/s^2, 2.5 ms control tick.
struct MachineLimits {
  double v_max = 1000.0;   // mm/s
  double a_max = 23000.0;  // mm/s^2
  double tick = 0.0025;    // s

  /// Throws InputError unless all three are finite and positive.
  void validate() const;
};

enum class ProfileShape { kTrapezoidal, kTriangular };

/// Stop-to-stop speed law along a path of given length.
struct MotionProfile {
  double length = 0.0;
  double peak_speed = 0.0;
  double accel = 0.0;
  double accel_time = 0.0;   // time to reach peak speed
  double cruise_time = 0.0;  // zero for triangular profiles
  double total_time = 0.0;
  ProfileShape shape = ProfileShape::kTrapezoidal;

  /// Arc length travelled at time t, clamped to [0, length].
  double position(double t) const;
  double speed(double t) const;
};

/// Trapezoid at a_max up to min(feed, sqrt(a_max L)), or a triangle when the
/// path is too short to cruise. Throws InvalidFeed for feed outside
/// (0, v_max] and InputError for a non-positive length.
MotionProfile plan_profile(double path_length, const MachineLimits& limits, double feed);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct LineSegment {
  Point2 end;
};

enum class ArcDirection { kClockwise, kCounterClockwise };

/// Arc from the previous end point to `end` about `center`. An arc whose
/// end equals its start is a full circle.
struct ArcSegment {
  Point2 end;
  Point2 center;
  ArcDirection direction = ArcDirection::kCounterClockwise;
};

using Segment = std::variant<LineSegment, ArcSegment>;

struct Contour {
  double z_plane = 0.0;
  bool laser_on = true;
  Point2 start;
  std::vector<Segment> segments;
  std::optional<double> feed_override;  // mm/s, defaults to v_max
};

struct CutProgram {
  std::vector<Contour> contours;

  /// Throws EmptyProgram / InvalidProgram.
  void validate() const;
};

struct Setpoint {
  double t = 0.0;
  Pose pose;
  JointAngles joints;
  bool laser_on = false;
  bool operator==(const Setpoint&) const = default;
};

/// Samples one tick apart within each motion; the last sample of every
/// motion is clamped to the motion's end time.
struct SetpointStream {
  std::vector<Setpoint> samples;
  bool operator==(const SetpointStream&) const = default;
};

/// Plans every segment stop-to-stop, joined by laser-off rapids between
/// contours. Arcs run at a derated speed so that tangential plus centripetal
/// acceleration stays within a_max. Throws UnreachableSample, InvalidFeed,
/// EmptyProgram, InvalidProgram.
SetpointStream plan_program(const RobotGeometry& geometry, const CutProgram& program,
                            const MachineLimits& limits);

enum class ViolationKind { kTimeBase, kSpeed, kAcceleration, kUnreachable, kJointMismatch };

const char* to_string(ViolationKind kind);

struct Violation {
  std::size_t index = 0;
  ViolationKind kind = ViolationKind::kSpeed;
  double value = 0.0;
};

struct StreamReport {
  double max_speed = 0.0;         // mm/s
  double max_acceleration = 0.0;  // mm/s^2
  double max_joint_step = 0.0;    // rad per sample
  double max_joint_error = 0.0;   // |joints - IK(pose)|, rad
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Relative slack on the speed limit.
inline constexpr double kSpeedTolerance = 1e-9;
/// Relative slack on the acceleration limit; finite differences across a
/// profile corner blend two phases.
inline constexpr double kAccelTolerance = 0.05;
/// Allowed disagreement between stored joints and IK of the stored pose.
inline constexpr double kJointTolerance = 1e-9;

/// Recomputes speed and acceleration by finite differences over the samples
/// and checks every sample against inverse kinematics.
StreamReport validate_stream(const RobotGeometry& geometry, const SetpointStream& stream,
                             const MachineLimits& limits);

}  // namespace deltacut
