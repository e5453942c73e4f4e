#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "deltacut/control_sim.hpp"
#include "deltacut/design_opt.hpp"
#include "deltacut/geometry.hpp"
#include "deltacut/trajectory.hpp"
#include "deltacut/workspace.hpp"

// File formats. parse_* take document text, load_* read a file; both throw
// ParseError for malformed input and the module's own error for violated
// invariants.

namespace deltacut::io {

/// {"f": .., "e": .., "rf": .., "re": ..} in mm.
RobotGeometry parse_geometry(std::string_view text);
RobotGeometry load_geometry(const std::filesystem::path& path);
std::string geometry_json(const RobotGeometry& geometry);

/// [[x, y, z], ...] in mm.
PrescribedWorkspace parse_prescribed(std::string_view text);
PrescribedWorkspace load_prescribed(const std::filesystem::path& path);
std::string prescribed_json(const PrescribedWorkspace& prescribed);

/// {"f": [lo, hi], "e": [lo, hi], "rf": [lo, hi], "re": [lo, hi]}.
DesignBounds parse_bounds(std::string_view text);
DesignBounds load_bounds(const std::filesystem::path& path);

/// GaConfig field names; missing fields keep their defaults.
GaConfig parse_ga_config(std::string_view text);
GaConfig load_ga_config(const std::filesystem::path& path);

/// Result report: best genome, fitness, coverage, history, evaluation count
/// and the effective bounds and config (seed included).
std::string ga_report_json(const GaResult& result, const DesignBounds& bounds,
                           const GaConfig& config, std::size_t prescribed_points);

/// {"contours": [{"z_plane": -300, "laser_on": true, "start": [x, y],
///   "feed_override": 800, "segments": [{"type": "line", "end": [x, y]},
///   {"type": "arc", "end": [x, y], "center": [x, y], "direction": "ccw"}]}]}
CutProgram parse_cut_program(std::string_view text);
CutProgram load_cut_program(const std::filesystem::path& path);

/// {"pulse_period": 1, "timeout": 4,
///  "processes": [{"name": "motion", "severity": "critical"}, ...]}
WatchdogConfig parse_watchdog_config(std::string_view text);
WatchdogConfig load_watchdog_config(const std::filesystem::path& path);

/// {"intervals": [{"process_name": "motion", "start_tick": 20, "end_tick": 99}]}
FaultScript parse_fault_script(std::string_view text);
FaultScript load_fault_script(const std::filesystem::path& path);

/// Header `t,x,y,z,theta1,theta2,theta3,laser`, 17 significant digits,
/// laser as 0/1, LF line endings.
inline constexpr std::string_view kStreamHeader = "t,x,y,z,theta1,theta2,theta3,laser";
void write_stream_csv(std::ostream& out, const SetpointStream& stream);
SetpointStream read_stream_csv(std::istream& in);
SetpointStream load_stream_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace deltacut::io
