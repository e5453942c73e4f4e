// deltacut: command-line front end for the Delta laser-cutting toolkit.
//
// Exit status: 0 success, 1 domain failure (unreachable pose, no assembly,
// coverage shortfall, aborted run), 2 usage or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deltacut/control_sim.hpp"
#include "deltacut/design_opt.hpp"
#include "deltacut/errors.hpp"
#include "deltacut/format.hpp"
#include "deltacut/io.hpp"
#include "deltacut/kinematics.hpp"
#include "deltacut/trajectory.hpp"
#include "deltacut/workspace.hpp"

namespace {

using namespace deltacut;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Writes to `path`, or stdout when empty.
void emit_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw ParseError("write failed for '" + path + "'");
}

struct IkArgs {
  std::string geometry;
  std::vector<double> coords;
};

int run_ik(const IkArgs& args) {
  const RobotGeometry geometry = io::load_geometry(args.geometry);
  const Pose pose{args.coords[0], args.coords[1], args.coords[2]};
  const JointAngles q = inverse_kinematics(geometry, pose);
  std::cout << format_real(q.theta1) << ' ' << format_real(q.theta2) << ' '
            << format_real(q.theta3) << '\n';
  return 0;
}

struct FkArgs {
  std::string geometry;
  std::vector<double> angles;
};

int run_fk(const FkArgs& args) {
  const RobotGeometry geometry = io::load_geometry(args.geometry);
  const Pose p =
      forward_kinematics(geometry, {args.angles[0], args.angles[1], args.angles[2]});
  std::cout << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << '\n';
  return 0;
}

struct WorkspaceArgs {
  std::string geometry;
  std::string out;
  double resolution = 10.0;
  std::optional<double> x_min, x_max, y_min, y_max, z_min, z_max;
  unsigned threads = 0;
};

int run_workspace(const WorkspaceArgs& args) {
  const RobotGeometry geometry = io::load_geometry(args.geometry);
  GridSpec spec = default_grid_spec(geometry, args.resolution);
  spec.x_min = args.x_min.value_or(spec.x_min);
  spec.x_max = args.x_max.value_or(spec.x_max);
  spec.y_min = args.y_min.value_or(spec.y_min);
  spec.y_max = args.y_max.value_or(spec.y_max);
  spec.z_min = args.z_min.value_or(spec.z_min);
  spec.z_max = args.z_max.value_or(spec.z_max);

  const WorkspaceGrid grid = compute_workspace(geometry, spec, args.threads);
  if (!args.out.empty()) {
    std::ostringstream dump;
    write_grid(dump, grid, geometry);
    emit_output(args.out, dump.str());
  }
  const auto d = grid.dims();
  std::cout << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n'
            << "cells " << grid.size() << '\n'
            << "occupied " << grid.occupied_count() << '\n'
            << "volume " << format_real(volume_estimate(grid)) << '\n';
  return 0;
}

struct OptimizeArgs {
  std::string bounds;
  std::string prescribed;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> population, generations, tournament, elitism;
  std::optional<double> crossover, sigma, penalty;
  std::optional<double> min_coverage;
  unsigned threads = 0;
};

int run_optimize(const OptimizeArgs& args) {
  const DesignBounds bounds = io::load_bounds(args.bounds);
  const PrescribedWorkspace prescribed = io::load_prescribed(args.prescribed);
  GaConfig config = args.config.empty() ? GaConfig{} : io::load_ga_config(args.config);
  if (args.seed) config.seed = *args.seed;
  if (args.population) config.population_size = *args.population;
  if (args.generations) config.generations = *args.generations;
  if (args.tournament) config.tournament_size = *args.tournament;
  if (args.elitism) config.elitism_count = *args.elitism;
  if (args.crossover) config.crossover_rate = *args.crossover;
  if (args.sigma) config.mutation_sigma_fraction = *args.sigma;
  if (args.penalty) config.size_penalty_weight = *args.penalty;

  const GaResult result = run_ga(bounds, prescribed, config, args.threads);
  emit_output(args.out, io::ga_report_json(result, bounds, config, prescribed.size()));
  std::cerr << "best fitness " << format_real(result.best_fitness) << ", coverage "
            << format_real(result.best_coverage) << ", evaluations " << result.evaluations
            << '\n';
  if (args.min_coverage && result.best_coverage < *args.min_coverage) {
    std::cerr << "coverage shortfall: " << format_real(result.best_coverage) << " < "
              << format_real(*args.min_coverage) << '\n';
    return kExitDomain;
  }
  return 0;
}

struct PlanArgs {
  std::string geometry;
  std::string program;
  std::string out;
  MachineLimits limits;
};

int run_plan(const PlanArgs& args) {
  const RobotGeometry geometry = io::load_geometry(args.geometry);
  const CutProgram program = io::load_cut_program(args.program);
  const SetpointStream stream = plan_program(geometry, program, args.limits);
  std::ostringstream csv;
  io::write_stream_csv(csv, stream);
  emit_output(args.out, csv.str());
  std::cerr << "samples " << stream.samples.size() << ", duration "
            << format_real(stream.samples.back().t) << " s (v_max "
            << format_real(args.limits.v_max) << " mm/s, a_max " << format_real(args.limits.a_max)
            << " mm/s^2, tick " << format_real(args.limits.tick) << " s)\n";
  return 0;
}

struct SimulateArgs {
  std::string stream;
  std::string watchdog;
  std::string faults;
  std::string out;
  std::optional<long> timeout, pulse_period;
};

int run_simulate(const SimulateArgs& args) {
  const SetpointStream stream =
      args.stream == "-" ? io::read_stream_csv(std::cin) : io::load_stream_csv(args.stream);
  WatchdogConfig config =
      args.watchdog.empty() ? WatchdogConfig{} : io::load_watchdog_config(args.watchdog);
  if (args.timeout) config.timeout = *args.timeout;
  if (args.pulse_period) config.pulse_period = *args.pulse_period;
  const FaultScript faults = args.faults.empty() ? FaultScript{} : io::load_fault_script(args.faults);

  const SimulationResult result = simulate(stream, config, faults);
  const std::string trace = format_trace(result.trace);
  emit_output(args.out, trace);

  const MachineState& s = result.final_state;
  std::ostream& summary = args.out.empty() ? std::cerr : std::cout;
  summary << "status " << to_string(s.status) << '\n'
          << "tick " << s.tick << '\n'
          << "pose " << format_real(s.pose.x) << ' ' << format_real(s.pose.y) << ' '
          << format_real(s.pose.z) << '\n';
  return s.status == RunStatus::kCompleted ? 0 : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta robot laser-cutting toolkit: kinematics, workspace, design, planning, "
               "control simulation.\nLengths in mm, angles in rad, time in s."};
  app.require_subcommand(1);

  IkArgs ik;
  auto* ik_cmd = app.add_subcommand("ik", "Inverse kinematics: pose (mm) -> theta1 theta2 theta3 (rad)");
  ik_cmd->add_option("--geometry", ik.geometry, "Geometry JSON {f, e, rf, re} (mm)")
      ->required()
      ->check(CLI::ExistingFile);
  ik_cmd->add_option("xyz", ik.coords, "Effector position x y z (mm)")->required()->expected(3);

  FkArgs fk;
  auto* fk_cmd = app.add_subcommand("fk", "Forward kinematics: theta1 theta2 theta3 (rad) -> x y z (mm)");
  fk_cmd->add_option("--geometry", fk.geometry, "Geometry JSON {f, e, rf, re} (mm)")
      ->required()
      ->check(CLI::ExistingFile);
  fk_cmd->add_option("thetas", fk.angles, "Joint angles (rad), each in (-pi/2, pi)")
      ->required()
      ->expected(3);

  WorkspaceArgs ws;
  auto* ws_cmd = app.add_subcommand(
      "workspace", "Reachable-cell grid. Bounds default to a + rf + re horizontally, z in [-(rf + re), 0]");
  ws_cmd->add_option("--geometry", ws.geometry, "Geometry JSON (mm)")->required()->check(CLI::ExistingFile);
  ws_cmd->add_option("--out", ws.out, "Grid dump file (binary, documented header)");
  ws_cmd->add_option("--resolution", ws.resolution, "Cell edge (mm)")->capture_default_str();
  ws_cmd->add_option("--xmin", ws.x_min, "Grid bound (mm)");
  ws_cmd->add_option("--xmax", ws.x_max, "Grid bound (mm)");
  ws_cmd->add_option("--ymin", ws.y_min, "Grid bound (mm)");
  ws_cmd->add_option("--ymax", ws.y_max, "Grid bound (mm)");
  ws_cmd->add_option("--zmin", ws.z_min, "Grid bound (mm)");
  ws_cmd->add_option("--zmax", ws.z_max, "Grid bound (mm)");
  ws_cmd->add_option("--threads", ws.threads, "Worker threads (0 = all cores)")->capture_default_str();

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Genetic-algorithm sizing of f, e, rf, re for a prescribed point set");
  opt_cmd->add_option("--bounds", opt.bounds, "Bounds JSON {f: [lo, hi], e, rf, re} (mm)")
      ->required()
      ->check(CLI::ExistingFile);
  opt_cmd->add_option("--prescribed", opt.prescribed, "Prescribed points JSON [[x, y, z], ...] (mm)")
      ->required()
      ->check(CLI::ExistingFile);
  opt_cmd->add_option("--config", opt.config, "GA config JSON; flags below override it")
      ->check(CLI::ExistingFile);
  opt_cmd->add_option("--out", opt.out, "Result report JSON (stdout if omitted)");
  opt_cmd->add_option("--seed", opt.seed, "RNG seed (default 42)");
  opt_cmd->add_option("--population", opt.population, "Population size (default 50)");
  opt_cmd->add_option("--generations", opt.generations, "Generations (default 100)");
  opt_cmd->add_option("--tournament", opt.tournament, "Tournament size (default 3)");
  opt_cmd->add_option("--elitism", opt.elitism, "Elite count (default 1)");
  opt_cmd->add_option("--crossover", opt.crossover, "Crossover rate (default 0.9)");
  opt_cmd->add_option("--sigma", opt.sigma, "Mutation sigma as a fraction of each range (default 0.05)");
  opt_cmd->add_option("--penalty", opt.penalty, "Size penalty weight lambda (default 0.05)");
  opt_cmd->add_option("--min-coverage", opt.min_coverage, "Exit 1 if the best coverage falls below this");
  opt_cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)")->capture_default_str();

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a cut program into a setpoint stream CSV");
  plan_cmd->add_option("--geometry", plan.geometry, "Geometry JSON (mm)")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--program", plan.program, "Cut program JSON")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--out", plan.out, "Stream CSV (stdout if omitted)");
  plan_cmd->add_option("--vmax", plan.limits.v_max, "Path speed limit (mm/s), 60 m/min")->capture_default_str();
  plan_cmd->add_option("--amax", plan.limits.a_max, "Path acceleration limit (mm/s^2), 23 m/s^2")
      ->capture_default_str();
  plan_cmd->add_option("--tick", plan.limits.tick, "Control period (s), 2.5 ms")->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a stream CSV under watchdog supervision");
  sim_cmd->add_option("--stream", sim.stream, "Stream CSV from `plan`, or - for stdin")->required();
  sim_cmd->add_option("--watchdog", sim.watchdog, "Watchdog config JSON (default: period 1, timeout 4 ticks)")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--faults", sim.faults, "Fault script JSON")->check(CLI::ExistingFile);
  sim_cmd->add_option("--timeout", sim.timeout, "Watchdog timeout (ticks of 2.5 ms, default 4)");
  sim_cmd->add_option("--pulse-period", sim.pulse_period, "Pulse period (ticks, default 1)");
  sim_cmd->add_option("--out", sim.out, "Trace file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ik_cmd) return run_ik(ik);
    if (*fk_cmd) return run_fk(fk);
    if (*ws_cmd) return run_workspace(ws);
    if (*opt_cmd) return run_optimize(opt);
    if (*plan_cmd) return run_plan(plan);
    if (*sim_cmd) return run_simulate(sim);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
