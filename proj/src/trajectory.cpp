#include "deltacut/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "deltacut/errors.hpp"
#include "deltacut/format.hpp"
#include "deltacut/kinematics.hpp"

namespace deltacut {
namespace {

constexpr double kArcRadiusTolerance = 1e-6;  // mm
constexpr double kMinSegmentLength = 1e-9;    // mm

MotionProfile make_profile(double length, double speed_limit, double accel) {
  MotionProfile p;
  p.length = length;
  p.accel = accel;
  if (speed_limit * speed_limit <= accel * length) {
    p.shape = ProfileShape::kTrapezoidal;
    p.peak_speed = speed_limit;
    p.accel_time = speed_limit / accel;
    p.cruise_time = length / speed_limit - speed_limit / accel;
    p.total_time = length / speed_limit + speed_limit / accel;
  } else {
    p.shape = ProfileShape::kTriangular;
    p.peak_speed = std::sqrt(accel * length);
    p.accel_time = p.peak_speed / accel;
    p.cruise_time = 0.0;
    p.total_time = 2.0 * std::sqrt(length / accel);
  }
  return p;
}

// A straight 3-D move or a planar arc, parameterised by arc length.
struct Path {
  enum class Kind { kLine, kArc } kind = Kind::kLine;
  Eigen::Vector3d start;
  Eigen::Vector3d end;
  double length = 0.0;
  // arcs only
  Eigen::Vector2d center;
  double radius = 0.0;
  double start_angle = 0.0;
  double direction = 1.0;  // +1 counter-clockwise

  Eigen::Vector3d at(double s) const {
    if (kind == Kind::kLine) return start + (s / length) * (end - start);
    const double phi = start_angle + direction * s / radius;
    return {center.x() + radius * std::cos(phi), center.y() + radius * std::sin(phi), start.z()};
  }
};

struct Motion {
  Path path;
  MotionProfile profile;
  bool laser_on = false;
};

Path line_path(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  Path p;
  p.kind = Path::Kind::kLine;
  p.start = from;
  p.end = to;
  p.length = (to - from).norm();
  return p;
}

Path arc_path(const Point2& from, const ArcSegment& arc, double z) {
  Path p;
  p.kind = Path::Kind::kArc;
  p.start = {from.x, from.y, z};
  p.end = {arc.end.x, arc.end.y, z};
  p.center = {arc.center.x, arc.center.y};
  p.radius = std::hypot(from.x - arc.center.x, from.y - arc.center.y);
  p.start_angle = std::atan2(from.y - arc.center.y, from.x - arc.center.x);
  const double end_angle = std::atan2(arc.end.y - arc.center.y, arc.end.x - arc.center.x);
  p.direction = arc.direction == ArcDirection::kCounterClockwise ? 1.0 : -1.0;

  double sweep = p.direction * (end_angle - p.start_angle);
  sweep = std::fmod(sweep, 2.0 * std::numbers::pi);
  if (sweep < 0.0) sweep += 2.0 * std::numbers::pi;
  const bool closed = std::hypot(arc.end.x - from.x, arc.end.y - from.y) <= kArcRadiusTolerance;
  if (closed || sweep * p.radius <= kMinSegmentLength) sweep = 2.0 * std::numbers::pi;
  p.length = sweep * p.radius;
  return p;
}

double segment_length(const Point2& from, const Segment& segment) {
  if (const auto* line = std::get_if<LineSegment>(&segment)) {
    return std::hypot(line->end.x - from.x, line->end.y - from.y);
  }
  return arc_path(from, std::get<ArcSegment>(segment), 0.0).length;
}

Point2 segment_end(const Segment& segment) {
  return std::visit([](const auto& s) { return s.end; }, segment);
}

std::string point_text(const Pose& p) {
  return "(" + format_real(p.x) + ", " + format_real(p.y) + ", " + format_real(p.z) + ")";
}

}  // namespace

void MachineLimits::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(v_max)) throw InputError("machine limits: v_max > 0 violated");
  if (!positive(a_max)) throw InputError("machine limits: a_max > 0 violated");
  if (!positive(tick)) throw InputError("machine limits: tick > 0 violated");
}

double MotionProfile::position(double t) const {
  t = std::clamp(t, 0.0, total_time);
  const double accel_distance = 0.5 * accel * accel_time * accel_time;
  double s;
  if (t <= accel_time) {
    s = 0.5 * accel * t * t;
  } else if (t <= accel_time + cruise_time) {
    s = accel_distance + peak_speed * (t - accel_time);
  } else {
    const double remaining = total_time - t;
    s = length - 0.5 * accel * remaining * remaining;
  }
  return std::clamp(s, 0.0, length);
}

double MotionProfile::speed(double t) const {
  if (t <= 0.0 || t >= total_time) return 0.0;
  if (t <= accel_time) return accel * t;
  if (t <= accel_time + cruise_time) return peak_speed;
  return accel * (total_time - t);
}

MotionProfile plan_profile(double path_length, const MachineLimits& limits, double feed) {
  limits.validate();
  if (!std::isfinite(path_length) || !(path_length > 0.0)) {
    throw InputError("plan_profile: path length must be positive");
  }
  if (!std::isfinite(feed) || !(feed > 0.0) || feed > limits.v_max) {
    throw InvalidFeed("InvalidFeed: feed " + format_real(feed) + " mm/s outside (0, " +
                      format_real(limits.v_max) + "]");
  }
  return make_profile(path_length, feed, limits.a_max);
}

void CutProgram::validate() const {
  if (contours.empty()) throw EmptyProgram("EmptyProgram: program has no contours");
  for (std::size_t c = 0; c < contours.size(); ++c) {
    const Contour& contour = contours[c];
    const std::string where = "contour " + std::to_string(c) + ": ";
    if (contour.segments.empty()) throw InvalidProgram(where + "needs at least one segment");
    if (!std::isfinite(contour.z_plane) || !(contour.z_plane < 0.0)) {
      throw InvalidProgram(where + "z_plane < 0 violated");
    }
    if (!std::isfinite(contour.start.x) || !std::isfinite(contour.start.y)) {
      throw InvalidProgram(where + "start must be finite");
    }
    if (contour.feed_override &&
        (!std::isfinite(*contour.feed_override) || !(*contour.feed_override > 0.0))) {
      throw InvalidFeed("InvalidFeed: " + where + "feed_override must be positive");
    }
    Point2 cursor = contour.start;
    for (std::size_t s = 0; s < contour.segments.size(); ++s) {
      const Segment& segment = contour.segments[s];
      const std::string at = where + "segment " + std::to_string(s) + ": ";
      const Point2 end = segment_end(segment);
      if (!std::isfinite(end.x) || !std::isfinite(end.y)) {
        throw InvalidProgram(at + "end point must be finite");
      }
      if (const auto* arc = std::get_if<ArcSegment>(&segment)) {
        const double r0 = std::hypot(cursor.x - arc->center.x, cursor.y - arc->center.y);
        const double r1 = std::hypot(end.x - arc->center.x, end.y - arc->center.y);
        if (!std::isfinite(r0) || !(r0 > kMinSegmentLength)) {
          throw InvalidProgram(at + "arc radius must be positive");
        }
        if (std::abs(r0 - r1) > kArcRadiusTolerance) {
          throw InvalidProgram(at + "|start - center| = |end - center| violated");
        }
      } else if (segment_length(cursor, segment) <= kMinSegmentLength) {
        throw InvalidProgram(at + "zero-length line");
      }
      cursor = end;
    }
  }
}

SetpointStream plan_program(const RobotGeometry& geometry, const CutProgram& program,
                            const MachineLimits& limits) {
  limits.validate();
  program.validate();

  std::vector<Motion> motions;
  Eigen::Vector3d cursor;
  for (std::size_t c = 0; c < program.contours.size(); ++c) {
    const Contour& contour = program.contours[c];
    const Eigen::Vector3d start{contour.start.x, contour.start.y, contour.z_plane};
    if (c > 0) {
      const Path rapid = line_path(cursor, start);
      if (rapid.length > kMinSegmentLength) {
        motions.push_back({rapid, plan_profile(rapid.length, limits, limits.v_max), false});
      }
    }
    const double feed = contour.feed_override.value_or(limits.v_max);
    Point2 from = contour.start;
    for (const Segment& segment : contour.segments) {
      if (const auto* line = std::get_if<LineSegment>(&segment)) {
        const Path path = line_path({from.x, from.y, contour.z_plane},
                                    {line->end.x, line->end.y, contour.z_plane});
        motions.push_back({path, plan_profile(path.length, limits, feed), contour.laser_on});
      } else {
        const Path path = arc_path(from, std::get<ArcSegment>(segment), contour.z_plane);
        // Hold centripetal acceleration to a_max / sqrt 2 and give the rest
        // to the tangential profile, so |a| <= a_max along the arc.
        const double a = limits.a_max;
        const double speed = std::min(feed, std::sqrt(a * path.radius / std::numbers::sqrt2));
        const double centripetal = speed * speed / path.radius;
        const double tangential = std::sqrt(a * a - centripetal * centripetal);
        plan_profile(path.length, limits, feed);  // feed checks
        motions.push_back({path, make_profile(path.length, speed, tangential), contour.laser_on});
      }
      from = segment_end(segment);
    }
    cursor = {from.x, from.y, contour.z_plane};
  }

  SetpointStream stream;
  double offset = 0.0;
  for (std::size_t m = 0; m < motions.size(); ++m) {
    const Motion& motion = motions[m];
    const double total = motion.profile.total_time;
    const auto ticks = static_cast<std::size_t>(std::max(1.0, std::ceil(total / limits.tick - 1e-9)));
    for (std::size_t k = (m == 0 ? 0 : 1); k <= ticks; ++k) {
      const double local = k < ticks ? static_cast<double>(k) * limits.tick : total;
      const Eigen::Vector3d p =
          k < ticks ? motion.path.at(motion.profile.position(local)) : motion.path.end;
      Setpoint sample;
      sample.t = offset + local;
      sample.pose = {p.x(), p.y(), p.z()};
      sample.laser_on = motion.laser_on;
      try {
        sample.joints = inverse_kinematics(geometry, sample.pose);
      } catch (const UnreachableError& e) {
        throw UnreachableSample(stream.samples.size(), sample.t, sample.pose, e.arm(),
                                "UnreachableSample: sample " +
                                    std::to_string(stream.samples.size()) + " at t = " +
                                    format_real(sample.t) + " s, pose " +
                                    point_text(sample.pose) + ", arm " + std::to_string(e.arm()));
      }
      stream.samples.push_back(sample);
    }
    offset += total;
  }
  return stream;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kTimeBase:
      return "time_base";
    case ViolationKind::kSpeed:
      return "speed";
    case ViolationKind::kAcceleration:
      return "acceleration";
    case ViolationKind::kUnreachable:
      return "unreachable";
    case ViolationKind::kJointMismatch:
      return "joint_mismatch";
  }
  return "unknown";
}

StreamReport validate_stream(const RobotGeometry& geometry, const SetpointStream& stream,
                             const MachineLimits& limits) {
  limits.validate();
  StreamReport report;
  const auto& s = stream.samples;
  const std::size_t n = s.size();
  if (n == 0) return report;

  const auto position = [&](std::size_t i) {
    return Eigen::Vector3d{s[i].pose.x, s[i].pose.y, s[i].pose.z};
  };

  if (s[0].t != 0.0) report.violations.push_back({0, ViolationKind::kTimeBase, s[0].t});

  // velocity[i] is the mean velocity over (t[i-1], t[i]).
  std::vector<Eigen::Vector3d> velocity(n, Eigen::Vector3d::Zero());
  std::vector<double> dt(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    dt[i] = s[i].t - s[i - 1].t;
    if (!(dt[i] > 0.0) || dt[i] > limits.tick * (1.0 + 1e-9)) {
      report.violations.push_back({i, ViolationKind::kTimeBase, dt[i]});
      continue;
    }
    velocity[i] = (position(i) - position(i - 1)) / dt[i];
    const double speed = velocity[i].norm();
    report.max_speed = std::max(report.max_speed, speed);
    if (speed > limits.v_max * (1.0 + kSpeedTolerance)) {
      report.violations.push_back({i, ViolationKind::kSpeed, speed});
    }
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(dt[i] > 0.0) || !(dt[i + 1] > 0.0)) continue;
    const double accel = ((velocity[i + 1] - velocity[i]) / (0.5 * (dt[i] + dt[i + 1]))).norm();
    report.max_acceleration = std::max(report.max_acceleration, accel);
    if (accel > limits.a_max * (1.0 + kAccelTolerance)) {
      report.violations.push_back({i, ViolationKind::kAcceleration, accel});
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      for (int arm = 1; arm <= 3; ++arm) {
        report.max_joint_step =
            std::max(report.max_joint_step, std::abs(s[i].joints[arm] - s[i - 1].joints[arm]));
      }
    }
    const auto joints = try_inverse_kinematics(geometry, s[i].pose);
    if (!joints) {
      report.violations.push_back({i, ViolationKind::kUnreachable, 0.0});
      continue;
    }
    double error = 0.0;
    for (int arm = 1; arm <= 3; ++arm) {
      error = std::max(error, std::abs((*joints)[arm] - s[i].joints[arm]));
    }
    report.max_joint_error = std::max(report.max_joint_error, error);
    if (error > kJointTolerance) {
      report.violations.push_back({i, ViolationKind::kJointMismatch, error});
    }
  }

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.index < b.index; });
  return report;
}

}  // namespace deltacut
