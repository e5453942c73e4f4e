#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "deltacut/geometry.hpp"
#include "deltacut/trajectory.hpp"

namespace deltacut {

enum class Severity { kCritical, kDegraded, kAdvisory };

const char* to_string(Severity severity);
/// Throws InputError for an unknown name.
Severity severity_from_string(std::string_view name);

struct ProcessSpec {
  std::string name;
  Severity severity = Severity::kAdvisory;
  bool operator==(const ProcessSpec&) const = default;
};

/// Every process must pulse once per `pulse_period` ticks; the watchdog trips
/// when more than `timeout` ticks pass since its last pulse.
///
/// Corrective actions by severity:
///   critical  laser off and hold at the current setpoint, run aborted
///   degraded  laser off, finish the current contour, then hold
///   advisory  warning in the trace only
struct WatchdogConfig {
  long pulse_period = 1;
  long timeout = 4;
  std::vector<ProcessSpec> processes = {
      {"motion", Severity::kCritical},
      {"laser", Severity::kDegraded},
      {"logging", Severity::kAdvisory},
  };

  /// Throws InvalidConfig.
  void validate() const;
  bool operator==(const WatchdogConfig&) const = default;
};

/// Pulses of `process_name` are suppressed for ticks in [start_tick, end_tick].
struct FaultInterval {
  std::string process_name;
  long start_tick = 0;
  long end_tick = 0;
};

struct FaultScript {
  std::vector<FaultInterval> intervals;
};

enum class EventKind {
  kPulseMissed,
  kWatchdogTrip,
  kCorrectiveAction,
  kLaserOff,
  kMotionHold,
  kRunComplete,
};

const char* to_string(EventKind kind);

struct TraceEvent {
  long tick = 0;
  EventKind kind = EventKind::kRunComplete;
  std::string process;  // empty when not tied to a process
  std::string detail;
  bool operator==(const TraceEvent&) const = default;
};

enum class RunStatus { kCompleted, kAborted, kHeld };

const char* to_string(RunStatus status);

struct MachineState {
  long tick = 0;
  Pose pose;
  JointAngles joints;
  bool laser_on = false;
  RunStatus status = RunStatus::kCompleted;
};

struct SimulationResult {
  std::vector<TraceEvent> trace;
  MachineState final_state;
};

/// Runs the stream one sample per tick under watchdog supervision. Commanded
/// setpoints are tracked perfectly. Run start counts as a pulse from every
/// process. Throws InvalidStream, UnknownProcess, InvalidConfig.
SimulationResult simulate(const SetpointStream& stream, const WatchdogConfig& config,
                          const FaultScript& faults);

/// One event per line, `tick<TAB>kind<TAB>process<TAB>detail`, LF endings.
std::string format_trace(const std::vector<TraceEvent>& trace);

/// Re-runs the simulation and compares the formatted traces byte for byte.
/// Invalid inputs compare unequal.
bool replay_check(const std::vector<TraceEvent>& trace, const SetpointStream& stream,
                  const WatchdogConfig& config, const FaultScript& faults);

}  // namespace deltacut
