#include "deltacut/control_sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "deltacut/errors.hpp"
#include "deltacut/format.hpp"

namespace deltacut {
namespace {

std::string pose_detail(const Pose& p) {
  return "pose " + format_real(p.x) + " " + format_real(p.y) + " " + format_real(p.z);
}

void validate_stream_shape(const SetpointStream& stream) {
  const auto& s = stream.samples;
  if (s.empty()) throw InvalidStream("InvalidStream: stream has no samples");
  if (s.front().t != 0.0) throw InvalidStream("InvalidStream: first sample must be at t = 0");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].pose.finite() || !s[i].joints.finite() || !std::isfinite(s[i].t)) {
      throw InvalidStream("InvalidStream: sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s[i].t > s[i - 1].t)) {
      throw InvalidStream("InvalidStream: timestamps must increase (sample " + std::to_string(i) +
                          ")");
    }
  }
}

// Last index of the run of samples sharing the laser flag of sample k.
std::size_t contour_end(const SetpointStream& stream, std::size_t k) {
  const bool flag = stream.samples[k].laser_on;
  std::size_t j = k;
  while (j + 1 < stream.samples.size() && stream.samples[j + 1].laser_on == flag) ++j;
  return j;
}

}  // namespace

const char* to_string(Severity severity) {
  switch (severity) {
    case Severity::kCritical:
      return "critical";
    case Severity::kDegraded:
      return "degraded";
    case Severity::kAdvisory:
      return "advisory";
  }
  return "unknown";
}

Severity severity_from_string(std::string_view name) {
  if (name == "critical") return Severity::kCritical;
  if (name == "degraded") return Severity::kDegraded;
  if (name == "advisory") return Severity::kAdvisory;
  throw InvalidConfig("InvalidConfig: unknown severity '" + std::string(name) + "'");
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kPulseMissed:
      return "pulse_missed";
    case EventKind::kWatchdogTrip:
      return "watchdog_trip";
    case EventKind::kCorrectiveAction:
      return "corrective_action";
    case EventKind::kLaserOff:
      return "laser_off";
    case EventKind::kMotionHold:
      return "motion_hold";
    case EventKind::kRunComplete:
      return "run_complete";
  }
  return "unknown";
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kCompleted:
      return "completed";
    case RunStatus::kAborted:
      return "aborted";
    case RunStatus::kHeld:
      return "held";
  }
  return "unknown";
}

void WatchdogConfig::validate() const {
  if (pulse_period < 1) throw InvalidConfig("InvalidConfig: pulse_period >= 1 violated");
  if (timeout < pulse_period) throw InvalidConfig("InvalidConfig: timeout >= pulse_period violated");
  std::set<std::string> names;
  for (const ProcessSpec& p : processes) {
    if (p.name.empty()) throw InvalidConfig("InvalidConfig: process name must not be empty");
    if (!names.insert(p.name).second) {
      throw InvalidConfig("InvalidConfig: duplicate process name '" + p.name + "'");
    }
  }
  for (const char* required : {"motion", "laser", "logging"}) {
    if (!names.count(required)) {
      throw InvalidConfig(std::string("InvalidConfig: built-in process '") + required +
                          "' missing");
    }
  }
}

SimulationResult simulate(const SetpointStream& stream, const WatchdogConfig& config,
                          const FaultScript& faults) {
  config.validate();
  validate_stream_shape(stream);

  const std::size_t np = config.processes.size();
  std::vector<std::vector<const FaultInterval*>> suppressed(np);
  for (const FaultInterval& f : faults.intervals) {
    const auto it = std::find_if(config.processes.begin(), config.processes.end(),
                                 [&](const ProcessSpec& p) { return p.name == f.process_name; });
    if (it == config.processes.end()) {
      throw UnknownProcess("UnknownProcess: fault script names unconfigured process '" +
                           f.process_name + "'");
    }
    if (f.start_tick > f.end_tick) {
      throw InvalidConfig("InvalidConfig: fault interval start_tick <= end_tick violated for '" +
                          f.process_name + "'");
    }
    suppressed[static_cast<std::size_t>(it - config.processes.begin())].push_back(&f);
  }

  const auto is_suppressed = [&](std::size_t p, long tick) {
    return std::any_of(suppressed[p].begin(), suppressed[p].end(), [&](const FaultInterval* f) {
      return tick >= f->start_tick && tick <= f->end_tick;
    });
  };

  SimulationResult result;
  auto& trace = result.trace;
  const auto emit = [&](long tick, EventKind kind, const std::string& process,
                        std::string detail) {
    trace.push_back({tick, kind, process, std::move(detail)});
  };

  std::vector<long> last_pulse(np, 0);
  std::vector<bool> tripped(np, false);
  bool laser_forced_off = false;
  std::optional<std::size_t> hold_at;
  std::string hold_cause;

  const auto finish = [&](std::size_t k, RunStatus status) {
    const Setpoint& s = stream.samples[k];
    result.final_state = {static_cast<long>(k), s.pose, s.joints,
                          s.laser_on && !laser_forced_off && status == RunStatus::kCompleted,
                          status};
    return result;
  };

  const std::size_t n = stream.samples.size();
  for (std::size_t k = 0; k < n; ++k) {
    const long tick = static_cast<long>(k);
    const Setpoint& sample = stream.samples[k];

    for (std::size_t p = 0; p < np; ++p) {
      if (tick % config.pulse_period == 0 && !is_suppressed(p, tick)) {
        last_pulse[p] = tick;
        tripped[p] = false;
      }
    }

    for (std::size_t p = 0; p < np; ++p) {
      const long elapsed = tick - last_pulse[p];
      if (tripped[p] || elapsed <= config.timeout) continue;
      tripped[p] = true;
      const ProcessSpec& proc = config.processes[p];
      emit(tick, EventKind::kPulseMissed, proc.name,
           "last pulse at tick " + std::to_string(last_pulse[p]));
      emit(tick, EventKind::kWatchdogTrip, proc.name,
           "elapsed " + std::to_string(elapsed) + " > timeout " + std::to_string(config.timeout) +
               " (" + to_string(proc.severity) + ")");
      switch (proc.severity) {
        case Severity::kCritical:
          emit(tick, EventKind::kCorrectiveAction, proc.name, "abort run");
          emit(tick, EventKind::kLaserOff, proc.name, "laser disabled");
          laser_forced_off = true;
          emit(tick, EventKind::kMotionHold, proc.name, pose_detail(sample.pose));
          return finish(k, RunStatus::kAborted);
        case Severity::kDegraded:
          emit(tick, EventKind::kCorrectiveAction, proc.name, "laser off, finish contour");
          emit(tick, EventKind::kLaserOff, proc.name, "laser disabled");
          laser_forced_off = true;
          if (!hold_at) {
            hold_at = contour_end(stream, k);
            hold_cause = proc.name;
          }
          break;
        case Severity::kAdvisory:
          emit(tick, EventKind::kCorrectiveAction, proc.name, "warning only");
          break;
      }
    }

    if (hold_at && k == *hold_at) {
      emit(tick, EventKind::kMotionHold, hold_cause, pose_detail(sample.pose));
      return finish(k, RunStatus::kHeld);
    }
    if (k + 1 == n) {
      emit(tick, EventKind::kRunComplete, "", pose_detail(sample.pose));
      return finish(k, RunStatus::kCompleted);
    }
  }
  return result;  // unreachable: the loop always finishes on the last sample
}

std::string format_trace(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const TraceEvent& e : trace) {
    out += std::to_string(e.tick);
    out += '\t';
    out += to_string(e.kind);
    out += '\t';
    out += e.process;
    out += '\t';
    out += e.detail;
    out += '\n';
  }
  return out;
}

bool replay_check(const std::vector<TraceEvent>& trace, const SetpointStream& stream,
                  const WatchdogConfig& config, const FaultScript& faults) {
  try {
    return format_trace(simulate(stream, config, faults).trace) == format_trace(trace);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace deltacut
