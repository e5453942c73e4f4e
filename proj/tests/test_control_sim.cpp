#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "deltacut/control_sim.hpp"
#include "deltacut/errors.hpp"
#include "deltacut/io.hpp"
#include "deltacut/kinematics.hpp"
#include "test_support.hpp"

using namespace deltacut;
using deltacut::testing::fixture_path;
using deltacut::testing::fixture_text;
using deltacut::testing::g0;

namespace {

SetpointStream line_stream() {
  return plan_program(g0(), io::load_cut_program(fixture_path("programs/line_100.json")),
                      MachineLimits{});
}

std::size_t count(const std::vector<TraceEvent>& trace, EventKind kind) {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

// Laser on for samples [0, 30), off for [30, 40), on again for [40, 60).
SetpointStream two_contour_stream() {
  SetpointStream s;
  const Pose p{0.0, 0.0, -300.0};
  const JointAngles j = inverse_kinematics(g0(), p);
  for (int k = 0; k < 60; ++k) s.samples.push_back({k * 0.0025, p, j, k < 30 || k >= 40});
  return s;
}

}  // namespace

TEST(Simulate, NominalRunCompletes) {
  const SetpointStream stream = line_stream();
  const SimulationResult r = simulate(stream, WatchdogConfig{}, {});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].kind, EventKind::kRunComplete);
  EXPECT_EQ(r.trace[0].tick, 58);
  EXPECT_EQ(r.final_state.status, RunStatus::kCompleted);
  EXPECT_EQ(r.final_state.pose, stream.samples.back().pose);
}

TEST(Simulate, CriticalFaultAbortsAtTrip) {
  const FaultScript faults = io::load_fault_script(fixture_path("faults_motion20.json"));
  const SimulationResult r = simulate(line_stream(), WatchdogConfig{}, faults);
  ASSERT_EQ(r.trace.size(), 5u);
  // Last pulse at 19; elapsed first exceeds 4 at tick 24.
  for (const TraceEvent& e : r.trace) EXPECT_EQ(e.tick, 24);
  EXPECT_EQ(r.trace[1].kind, EventKind::kWatchdogTrip);
  EXPECT_EQ(r.trace[3].kind, EventKind::kLaserOff);
  EXPECT_EQ(r.trace[4].kind, EventKind::kMotionHold);
  EXPECT_EQ(r.final_state.status, RunStatus::kAborted);
  EXPECT_EQ(r.final_state.tick, 24);
  EXPECT_FALSE(r.final_state.laser_on);
}

TEST(Simulate, GoldenTrace) {
  const SetpointStream stream = line_stream();
  const FaultScript faults = io::load_fault_script(fixture_path("faults_motion20.json"));
  const SimulationResult r = simulate(stream, WatchdogConfig{}, faults);
  EXPECT_EQ(format_trace(r.trace), fixture_text("golden_trace_motion20.tsv"));
}

TEST(Simulate, ShortGapDoesNotTrip) {
  const SimulationResult r = simulate(line_stream(), WatchdogConfig{}, {{{"logging", 10, 12}}});
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].kind, EventKind::kRunComplete);
}

TEST(Simulate, GapOfExactlyTimeoutDoesNotTrip) {
  // Pulses missing at 10..13: last pulse 9, next 14, elapsed peaks at 4.
  const SimulationResult r = simulate(line_stream(), WatchdogConfig{}, {{{"motion", 10, 13}}});
  EXPECT_EQ(count(r.trace, EventKind::kWatchdogTrip), 0u);
  const SimulationResult r2 = simulate(line_stream(), WatchdogConfig{}, {{{"motion", 10, 14}}});
  ASSERT_EQ(count(r2.trace, EventKind::kWatchdogTrip), 1u);
  EXPECT_EQ(r2.trace.front().tick, 14);
}

TEST(Simulate, DegradedFaultFinishesContour) {
  const SimulationResult r = simulate(two_contour_stream(), WatchdogConfig{}, {{{"laser", 5, 50}}});
  // Trip at 9, laser off, hold at the end of the first laser-on run.
  EXPECT_EQ(r.trace.front().tick, 9);
  EXPECT_EQ(r.trace.front().kind, EventKind::kPulseMissed);
  const auto off = std::find_if(r.trace.begin(), r.trace.end(),
                                [](const TraceEvent& e) { return e.kind == EventKind::kLaserOff; });
  ASSERT_NE(off, r.trace.end());
  EXPECT_EQ(off->tick, 9);
  EXPECT_EQ(r.trace.back().kind, EventKind::kMotionHold);
  EXPECT_EQ(r.trace.back().tick, 29);
  EXPECT_EQ(r.final_state.status, RunStatus::kHeld);
  EXPECT_FALSE(r.final_state.laser_on);
}

TEST(Simulate, AdvisoryFaultOnlyWarns) {
  const SimulationResult r = simulate(line_stream(), WatchdogConfig{}, {{{"logging", 5, 40}}});
  EXPECT_EQ(count(r.trace, EventKind::kWatchdogTrip), 1u);
  EXPECT_EQ(count(r.trace, EventKind::kLaserOff), 0u);
  EXPECT_EQ(count(r.trace, EventKind::kMotionHold), 0u);
  EXPECT_EQ(r.trace.back().kind, EventKind::kRunComplete);
  EXPECT_EQ(r.final_state.status, RunStatus::kCompleted);
  const auto warn = std::find_if(r.trace.begin(), r.trace.end(), [](const TraceEvent& e) {
    return e.kind == EventKind::kCorrectiveAction;
  });
  ASSERT_NE(warn, r.trace.end());
  EXPECT_EQ(warn->detail, "warning only");
}

TEST(Simulate, PulsePeriodSetsLastPulse) {
  WatchdogConfig c;
  c.pulse_period = 3;
  c.timeout = 5;
  // Pulses at 0, 3, ..., 18; suppressed from 20, so last pulse 18 and trip at 24.
  const SimulationResult r = simulate(line_stream(), c, {{{"motion", 20, 100}}});
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().tick, 24);
  EXPECT_EQ(r.trace.front().detail, "last pulse at tick 18");
}

TEST(Simulate, Errors) {
  EXPECT_THROW(simulate(line_stream(), WatchdogConfig{}, {{{"coolant", 1, 2}}}), UnknownProcess);
  EXPECT_THROW(simulate(SetpointStream{}, WatchdogConfig{}, {}), InvalidStream);

  SetpointStream backwards = line_stream();
  backwards.samples[5].t = backwards.samples[4].t;
  EXPECT_THROW(simulate(backwards, WatchdogConfig{}, {}), InvalidStream);

  WatchdogConfig bad;
  bad.timeout = 0;
  EXPECT_THROW(simulate(line_stream(), bad, {}), InvalidConfig);
  bad = WatchdogConfig{};
  bad.processes.pop_back();
  EXPECT_THROW(simulate(line_stream(), bad, {}), InvalidConfig);
  EXPECT_THROW(severity_from_string("fatal"), InvalidConfig);
}

TEST(ReplayCheck, DetectsEdits) {
  const SetpointStream stream = line_stream();
  const FaultScript faults{{{"motion", 20, 100}}};
  auto trace = simulate(stream, WatchdogConfig{}, faults).trace;
  EXPECT_TRUE(replay_check(trace, stream, WatchdogConfig{}, faults));
  trace[2].tick += 1;
  EXPECT_FALSE(replay_check(trace, stream, WatchdogConfig{}, faults));
  EXPECT_FALSE(replay_check({}, SetpointStream{}, WatchdogConfig{}, {}));
}

TEST(SimulateProperties, RandomFaultScripts) {
  std::mt19937_64 rng(11);
  const SetpointStream stream = two_contour_stream();
  const std::array<std::string, 3> names{"motion", "laser", "logging"};
  for (int run = 0; run < 300; ++run) {
    WatchdogConfig c;
    c.pulse_period = std::uniform_int_distribution<long>(1, 4)(rng);
    c.timeout = c.pulse_period + std::uniform_int_distribution<long>(0, 5)(rng);
    FaultScript faults;
    const int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < n; ++i) {
      const long a = std::uniform_int_distribution<long>(0, 59)(rng);
      const long b = a + std::uniform_int_distribution<long>(0, 15)(rng);
      faults.intervals.push_back({names[std::uniform_int_distribution<std::size_t>(0, 2)(rng)], a, b});
    }
    const SimulationResult r = simulate(stream, c, faults);
    ASSERT_FALSE(r.trace.empty());

    // Ticks never go backwards and the run ends with exactly one terminal event.
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].tick, r.trace[i - 1].tick);
    const auto terminal = [](const TraceEvent& e) {
      return e.kind == EventKind::kRunComplete || e.kind == EventKind::kMotionHold;
    };
    EXPECT_EQ(std::count_if(r.trace.begin(), r.trace.end(), terminal), 1);
    EXPECT_TRUE(terminal(r.trace.back()));

    // Critical trips switch the laser off on the same tick.
    for (const TraceEvent& e : r.trace) {
      if (e.kind != EventKind::kWatchdogTrip || e.process != "motion") continue;
      EXPECT_TRUE(std::any_of(r.trace.begin(), r.trace.end(), [&](const TraceEvent& o) {
        return o.kind == EventKind::kLaserOff && o.tick == e.tick;
      }));
    }
    EXPECT_TRUE(replay_check(r.trace, stream, c, faults));
  }
}
