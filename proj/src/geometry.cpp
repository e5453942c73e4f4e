#include "deltacut/geometry.hpp"

#include <sstream>

#include "deltacut/errors.hpp"

namespace deltacut {

std::optional<std::string> RobotGeometry::check(double f, double e, double rf, double re) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(f)) return "f > 0 violated";
  if (!positive(e)) return "e > 0 violated";
  if (!positive(rf)) return "rf > 0 violated";
  if (!positive(re)) return "re > 0 violated";

  const double a = f / (2.0 * std::numbers::sqrt3);
  const double b = e / (2.0 * std::numbers::sqrt3);
  const double reach = std::abs(a + rf - b);
  if (!(re > reach)) {
    std::ostringstream os;
    os << "home-pose assembly re > |a + rf - b| violated (re = " << re
       << ", |a + rf - b| = " << reach << ")";
    return os.str();
  }
  return std::nullopt;
}

RobotGeometry::RobotGeometry(double f, double e, double rf, double re)
    : f_(f), e_(e), rf_(rf), re_(re) {
  if (auto violation = check(f, e, rf, re)) {
    throw InvalidGeometry("invalid robot geometry: " + *violation);
  }
}

double RobotGeometry::home_z() const {
  const double horizontal = base_offset() + rf_ - effector_offset();
  return -std::sqrt(re_ * re_ - horizontal * horizontal);
}

}  // namespace deltacut
