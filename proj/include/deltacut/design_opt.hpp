#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "deltacut/geometry.hpp"
#include "deltacut/workspace.hpp"

namespace deltacut {

struct ParamRange {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const ParamRange&) const = default;
};

/// Search box for (f, e, r_f, r_e), mm.
struct DesignBounds {
  ParamRange f, e, rf, re;

  /// Throws InvalidBounds unless 0 < lower < upper for every parameter.
  void validate() const;
  double upper_sum() const { return f.upper + e.upper + rf.upper + re.upper; }
  std::array<ParamRange, 4> ranges() const { return {f, e, rf, re}; }

  bool operator==(const DesignBounds&) const = default;
};

/// Genome order: f, e, r_f, r_e.
using Genome = std::array<double, 4>;

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t generations = 100;
  std::size_t tournament_size = 3;
  double crossover_rate = 0.9;
  double mutation_sigma_fraction = 0.05;
  std::size_t elitism_count = 1;
  std::uint64_t seed = 42;
  double size_penalty_weight = 0.05;

  /// Throws InvalidConfig.
  void validate() const;
  bool operator==(const GaConfig&) const = default;
};

struct GenerationStats {
  double best_fitness = 0.0;  // best seen up to and including this generation
  double mean_fitness = 0.0;
  bool operator==(const GenerationStats&) const = default;
};

struct GaResult {
  Genome best{};
  double best_fitness = 0.0;
  double best_coverage = 0.0;
  std::vector<GenerationStats> history;  // generations + 1 entries
  std::size_t evaluations = 0;

  RobotGeometry best_geometry() const { return {best[0], best[1], best[2], best[3]}; }
  bool operator==(const GaResult&) const = default;
};

/// Score of infeasible genomes; below every feasible score when the penalty
/// weight is at most 1.
inline constexpr double kInfeasibleFitness = -1.0;

/// coverage - weight * (f + e + r_f + r_e) / size_scale, or kInfeasibleFitness
/// when the genome is not a valid RobotGeometry. size_scale is the sum of
/// the upper bounds of the search box.
double fitness(const Genome& genome, const PrescribedWorkspace& prescribed, double weight,
               double size_scale);

double fitness(const RobotGeometry& geometry, const PrescribedWorkspace& prescribed,
               double weight, double size_scale);

/// Real-coded GA: tournament selection, blend crossover, Gaussian mutation,
/// elitism. Bitwise deterministic for a given seed; fitness evaluation is
/// spread over `threads` workers (0 = hardware concurrency) without changing
/// the result.
GaResult run_ga(const DesignBounds& bounds, const PrescribedWorkspace& prescribed,
                const GaConfig& config, unsigned threads = 0);

/// Baseline: best of `evaluations` uniform samples from the bounds.
GaResult random_search(const DesignBounds& bounds, const PrescribedWorkspace& prescribed,
                       double weight, std::size_t evaluations, std::uint64_t seed);

}  // namespace deltacut
