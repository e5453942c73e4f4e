#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "deltacut/errors.hpp"
#include "deltacut/io.hpp"
#include "deltacut/kinematics.hpp"
#include "test_support.hpp"

using namespace deltacut;
using deltacut::testing::fixture_path;
using deltacut::testing::g0;

TEST(GeometryJson, ParsesAndRoundTrips) {
  const RobotGeometry g = io::load_geometry(fixture_path("g0_geometry.json"));
  EXPECT_EQ(g, g0());
  EXPECT_EQ(io::parse_geometry(io::geometry_json(g)), g);
}

TEST(GeometryJson, Errors) {
  EXPECT_THROW(io::parse_geometry("{"), ParseError);
  EXPECT_THROW(io::parse_geometry("[1, 2, 3, 4]"), ParseError);
  EXPECT_THROW(io::parse_geometry(R"({"f": 300, "e": 50, "rf": 100})"), ParseError);
  EXPECT_THROW(io::parse_geometry(R"({"f": "300", "e": 50, "rf": 100, "re": 300})"), ParseError);
  EXPECT_THROW(io::parse_geometry(R"({"f": 300, "e": 50, "rf": 100, "re": 10})"), InvalidGeometry);
  EXPECT_THROW(io::load_geometry("/nonexistent/geometry.json"), ParseError);
}

TEST(PrescribedJson, Parses) {
  const PrescribedWorkspace p = io::parse_prescribed("[[1, 2, -3], [4, 5, -6]]");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.points()[1], (Pose{4, 5, -6}));
  EXPECT_EQ(io::parse_prescribed(io::prescribed_json(p)).points(), p.points());
  EXPECT_THROW(io::parse_prescribed("[[1, 2]]"), ParseError);
  EXPECT_THROW(io::parse_prescribed("[]"), InvalidPrescribedWorkspace);
}

TEST(BoundsJson, Parses) {
  const DesignBounds b = io::parse_bounds(R"({"f": [1, 2], "e": [3, 4], "rf": [5, 6], "re": [7, 8]})");
  EXPECT_EQ(b.rf, (ParamRange{5, 6}));
  EXPECT_DOUBLE_EQ(b.upper_sum(), 20.0);
  EXPECT_THROW(io::parse_bounds(R"({"f": [1, 2], "e": [3, 4], "rf": [5, 6]})"), ParseError);
  EXPECT_THROW(io::parse_bounds(R"({"f": [2, 1], "e": [3, 4], "rf": [5, 6], "re": [7, 8]})"),
               InvalidBounds);
}

TEST(GaConfigJson, MissingFieldsKeepDefaults) {
  const GaConfig c = io::parse_ga_config(R"({"population_size": 20, "seed": 9})");
  EXPECT_EQ(c.population_size, 20u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.generations, GaConfig{}.generations);
  EXPECT_EQ(io::parse_ga_config("{}"), GaConfig{});
}

TEST(GaConfigJson, Errors) {
  EXPECT_THROW(io::parse_ga_config(R"({"population_size": -1})"), ParseError);
  EXPECT_THROW(io::parse_ga_config(R"({"generations": 2.5})"), ParseError);
  EXPECT_THROW(io::parse_ga_config(R"({"crossover_rate": "high"})"), ParseError);
  EXPECT_THROW(io::parse_ga_config(R"({"elitism_count": 50})"), InvalidConfig);
}

TEST(GaReport, EchoesConfigAndBounds) {
  GaResult r;
  r.best = {1, 2, 3, 4};
  r.best_fitness = 0.5;
  r.history = {{0.25, 0.125}, {0.5, 0.25}};
  r.evaluations = 7;
  GaConfig c;
  c.seed = 123;
  const DesignBounds b{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  const auto j = nlohmann::json::parse(io::ga_report_json(r, b, c, 200));
  EXPECT_EQ(j.at("config").at("seed").get<std::uint64_t>(), 123u);
  EXPECT_EQ(j.at("bounds").at("re")[1].get<double>(), 8.0);
  EXPECT_EQ(j.at("history").size(), 2u);
  EXPECT_EQ(j.at("best").at("rf").get<double>(), 3.0);
  EXPECT_EQ(j.at("prescribed_points").get<int>(), 200);
  EXPECT_EQ(j.at("evaluations").get<int>(), 7);
}

TEST(CutProgramJson, Parses) {
  const CutProgram p = io::parse_cut_program(R"({"contours": [{
    "z_plane": -300, "laser_on": false, "start": [0, 0], "feed_override": 400,
    "segments": [{"type": "line", "end": [10, 0]},
                 {"type": "arc", "end": [0, 10], "center": [0, 0], "direction": "cw"}]}]})");
  ASSERT_EQ(p.contours.size(), 1u);
  const Contour& c = p.contours[0];
  EXPECT_FALSE(c.laser_on);
  EXPECT_EQ(c.feed_override, 400.0);
  ASSERT_EQ(c.segments.size(), 2u);
  const auto& arc = std::get<ArcSegment>(c.segments[1]);
  EXPECT_EQ(arc.direction, ArcDirection::kClockwise);
  EXPECT_EQ(arc.end, (Point2{0, 10}));
}

TEST(CutProgramJson, Errors) {
  EXPECT_THROW(io::parse_cut_program(R"({"contours": [{"z_plane": -300, "start": [0, 0],
    "segments": [{"type": "spline", "end": [1, 1]}]}]})"), ParseError);
  EXPECT_THROW(io::parse_cut_program(R"({"contours": [{"z_plane": -300, "start": [0, 0],
    "segments": [{"type": "arc", "end": [1, 1], "center": [0, 1], "direction": "left"}]}]})"),
               ParseError);
  EXPECT_THROW(io::parse_cut_program(R"({"contours": [{"z_plane": -300, "segments": []}]})"),
               ParseError);
  EXPECT_THROW(io::parse_cut_program("{}"), ParseError);
}

TEST(WatchdogJson, Parses) {
  const WatchdogConfig c = io::parse_watchdog_config(R"({"pulse_period": 2, "timeout": 6,
    "processes": [{"name": "motion", "severity": "critical"}, {"name": "laser", "severity": "degraded"},
                  {"name": "logging", "severity": "advisory"}, {"name": "coolant", "severity": "degraded"}]})");
  EXPECT_EQ(c.pulse_period, 2);
  EXPECT_EQ(c.timeout, 6);
  ASSERT_EQ(c.processes.size(), 4u);
  EXPECT_EQ(c.processes[3], (ProcessSpec{"coolant", Severity::kDegraded}));
  EXPECT_EQ(io::parse_watchdog_config("{}"), WatchdogConfig{});
  EXPECT_THROW(io::parse_watchdog_config(R"({"timeout": 0})"), InvalidConfig);
}

TEST(FaultScriptJson, Parses) {
  const FaultScript f = io::load_fault_script(fixture_path("faults_motion20.json"));
  ASSERT_EQ(f.intervals.size(), 1u);
  EXPECT_EQ(f.intervals[0].process_name, "motion");
  EXPECT_EQ(f.intervals[0].start_tick, 20);
  EXPECT_THROW(io::parse_fault_script(R"({"intervals": [{"process_name": "motion"}]})"), ParseError);
  EXPECT_THROW(io::parse_fault_script("[]"), ParseError);
}

TEST(StreamCsv, HeaderAndFormat) {
  SetpointStream s;
  s.samples.push_back({0.0, {0.1, -2.0, -300.0}, {0.5, 0.25, 1.0 / 3.0}, true});
  std::ostringstream out;
  io::write_stream_csv(out, s);
  EXPECT_EQ(out.str(),
            "t,x,y,z,theta1,theta2,theta3,laser\n"
            "0,0.10000000000000001,-2,-300,0.5,0.25,0.33333333333333331,1\n");
}

TEST(StreamCsv, RoundTripIsExact) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 50; ++trial) {
    SetpointStream s;
    double t = 0.0;
    for (int k = 0; k < 40; ++k) {
      s.samples.push_back({t, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, u(rng) > 0});
      t += std::abs(u(rng)) * 1e-6 + 1e-9;
    }
    std::stringstream buf;
    io::write_stream_csv(buf, s);
    EXPECT_EQ(io::read_stream_csv(buf), s);
  }
}

TEST(StreamCsv, Errors) {
  std::istringstream wrong_header("t,x,y,z\n");
  EXPECT_THROW(io::read_stream_csv(wrong_header), ParseError);
  std::istringstream short_row("t,x,y,z,theta1,theta2,theta3,laser\n0,1,2\n");
  EXPECT_THROW(io::read_stream_csv(short_row), ParseError);
  std::istringstream bad_number("t,x,y,z,theta1,theta2,theta3,laser\n0,1,2,3x,0,0,0,1\n");
  EXPECT_THROW(io::read_stream_csv(bad_number), ParseError);
  std::istringstream bad_laser("t,x,y,z,theta1,theta2,theta3,laser\n0,1,2,3,0,0,0,2\n");
  EXPECT_THROW(io::read_stream_csv(bad_laser), ParseError);
}
