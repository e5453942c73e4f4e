#include "deltacut/design_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "deltacut/errors.hpp"
#include "deltacut/random.hpp"

namespace deltacut {
namespace {

constexpr double kBlendExtension = 0.1;
const char* const kParamNames[4] = {"f", "e", "rf", "re"};

template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = end > begin ? end - begin : 0;
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = begin + w; i < end; i += workers) fn(i);
    });
  }
}

GenerationStats stats_of(const std::vector<double>& scores) {
  const double best = *std::max_element(scores.begin(), scores.end());
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                      static_cast<double>(scores.size());
  return {best, mean};
}

// First index of the maximum, so ties resolve to the lowest index.
std::size_t argmax(const std::vector<double>& scores) {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) -
                                  scores.begin());
}

double coverage_of(const Genome& g, const PrescribedWorkspace& prescribed) {
  if (RobotGeometry::check(g[0], g[1], g[2], g[3])) return 0.0;
  return coverage(RobotGeometry(g[0], g[1], g[2], g[3]), prescribed);
}

}  // namespace

void DesignBounds::validate() const {
  const auto all = ranges();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const ParamRange& r = all[i];
    if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower > 0.0) ||
        !(r.upper > r.lower)) {
      throw InvalidBounds(std::string("InvalidBounds: 0 < lower < upper violated for ") +
                          kParamNames[i]);
    }
  }
}

void GaConfig::validate() const {
  if (population_size < 2) throw InvalidConfig("InvalidConfig: population_size >= 2 violated");
  if (tournament_size < 1 || tournament_size > population_size) {
    throw InvalidConfig("InvalidConfig: tournament_size in [1, population_size] violated");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw InvalidConfig("InvalidConfig: crossover_rate in [0, 1] violated");
  }
  if (!(mutation_sigma_fraction > 0.0 && mutation_sigma_fraction < 1.0)) {
    throw InvalidConfig("InvalidConfig: mutation_sigma_fraction in (0, 1) violated");
  }
  if (elitism_count >= population_size) {
    throw InvalidConfig("InvalidConfig: elitism_count < population_size violated");
  }
  if (!(size_penalty_weight >= 0.0) || !std::isfinite(size_penalty_weight)) {
    throw InvalidConfig("InvalidConfig: size_penalty_weight >= 0 violated");
  }
}

double fitness(const RobotGeometry& geometry, const PrescribedWorkspace& prescribed,
               double weight, double size_scale) {
  const double size = geometry.f() + geometry.e() + geometry.rf() + geometry.re();
  return coverage(geometry, prescribed) - weight * size / size_scale;
}

double fitness(const Genome& genome, const PrescribedWorkspace& prescribed, double weight,
               double size_scale) {
  if (RobotGeometry::check(genome[0], genome[1], genome[2], genome[3])) {
    return kInfeasibleFitness;
  }
  return fitness(RobotGeometry(genome[0], genome[1], genome[2], genome[3]), prescribed, weight,
                 size_scale);
}

GaResult run_ga(const DesignBounds& bounds, const PrescribedWorkspace& prescribed,
                const GaConfig& config, unsigned threads) {
  bounds.validate();
  config.validate();

  const auto ranges = bounds.ranges();
  const double scale = bounds.upper_sum();
  const std::size_t n = config.population_size;
  const std::size_t elite = config.elitism_count;

  std::vector<Genome> population(n);
  std::vector<double> scores(n);
  const auto evaluate = [&](std::size_t from) {
    parallel_for(from, n, threads, [&](std::size_t i) {
      scores[i] = fitness(population[i], prescribed, config.size_penalty_weight, scale);
    });
  };

  for (std::size_t k = 0; k < n; ++k) {
    RandomStream rng(stream_seed(config.seed, 0, k));
    for (std::size_t j = 0; j < 4; ++j) population[k][j] = rng.uniform(ranges[j].lower, ranges[j].upper);
  }
  evaluate(0);

  GaResult result;
  result.evaluations = n;
  result.history.reserve(config.generations + 1);
  result.history.push_back(stats_of(scores));
  std::size_t best_index = argmax(scores);
  result.best = population[best_index];
  result.best_fitness = scores[best_index];

  std::vector<std::size_t> order(n);
  std::vector<Genome> next(n);
  std::vector<double> next_scores(n);

  for (std::size_t gen = 1; gen <= config.generations; ++gen) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    for (std::size_t k = 0; k < elite; ++k) {
      next[k] = population[order[k]];
      next_scores[k] = scores[order[k]];
    }

    for (std::size_t k = elite; k < n; ++k) {
      RandomStream rng(stream_seed(config.seed, gen, k));
      const auto tournament = [&] {
        std::size_t winner = rng.index(n);
        for (std::size_t t = 1; t < config.tournament_size; ++t) {
          const std::size_t challenger = rng.index(n);
          if (scores[challenger] > scores[winner]) winner = challenger;
        }
        return winner;
      };
      const Genome& mother = population[tournament()];
      const Genome& father = population[tournament()];

      Genome child = mother;
      if (rng.uniform() < config.crossover_rate) {
        for (std::size_t j = 0; j < 4; ++j) {
          const double lo = std::min(mother[j], father[j]);
          const double hi = std::max(mother[j], father[j]);
          const double pad = kBlendExtension * (hi - lo);
          child[j] = std::clamp(rng.uniform(lo - pad, hi + pad), ranges[j].lower, ranges[j].upper);
        }
      }
      for (std::size_t j = 0; j < 4; ++j) {
        const double sigma = config.mutation_sigma_fraction * (ranges[j].upper - ranges[j].lower);
        child[j] = std::clamp(child[j] + sigma * rng.normal(), ranges[j].lower, ranges[j].upper);
      }
      next[k] = child;
    }

    population.swap(next);
    std::copy(next_scores.begin(), next_scores.begin() + static_cast<std::ptrdiff_t>(elite),
              scores.begin());
    evaluate(elite);
    result.evaluations += n - elite;

    best_index = argmax(scores);
    if (scores[best_index] > result.best_fitness) {
      result.best = population[best_index];
      result.best_fitness = scores[best_index];
    }
    // Best-so-far, so the sequence stays monotone without elitism too.
    GenerationStats stats = stats_of(scores);
    stats.best_fitness = result.best_fitness;
    result.history.push_back(stats);
  }

  result.best_coverage = coverage_of(result.best, prescribed);
  return result;
}

GaResult random_search(const DesignBounds& bounds, const PrescribedWorkspace& prescribed,
                       double weight, std::size_t evaluations, std::uint64_t seed) {
  bounds.validate();
  if (evaluations == 0) throw InvalidConfig("InvalidConfig: random search needs evaluations > 0");
  const auto ranges = bounds.ranges();
  const double scale = bounds.upper_sum();

  RandomStream rng(stream_seed(seed, UINT64_MAX, 0));
  GaResult result;
  result.best_fitness = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < evaluations; ++i) {
    Genome g;
    for (std::size_t j = 0; j < 4; ++j) g[j] = rng.uniform(ranges[j].lower, ranges[j].upper);
    const double score = fitness(g, prescribed, weight, scale);
    total += score;
    if (score > result.best_fitness) {
      result.best_fitness = score;
      result.best = g;
    }
  }
  result.evaluations = evaluations;
  result.history.push_back({result.best_fitness, total / static_cast<double>(evaluations)});
  result.best_coverage = coverage_of(result.best, prescribed);
  return result;
}

}  // namespace deltacut
