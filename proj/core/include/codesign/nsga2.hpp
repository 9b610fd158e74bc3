#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "codesign/evaluation.hpp"
#include "codesign/rng.hpp"

namespace codesign {

/// Mixed encoding: one categorical centroid index plus eight weight genes in
/// log10 space.
struct Genome {
  int centroid_gene = 0;
  std::array<double, 8> weight_genes{};

  ControlWeights to_weights() const;  // 10^gene per entry
};

struct Individual {
  Genome genome;
  Objectives objectives;
  int rank = -1;
  double crowding = 0.0;
  std::int64_t candidate_id = -1;
};

struct GaConfig {
  int population = 40;
  int generations = 60;
  double crossover_prob = 0.90;
  double mutation_prob = 0.11;  // per gene, 9 genes -> ~one expected mutation
  double sbx_eta = 15.0;
  double pm_eta = 20.0;
  std::uint64_t seed = 0;
  int k = 100;  // centroid count
  std::array<std::pair<double, double>, 8> weight_bounds = default_weight_bounds();

  static std::array<std::pair<double, double>, 8> default_weight_bounds() {
    std::array<std::pair<double, double>, 8> b;
    b.fill({-2.0, 4.0});
    return b;
  }
  void validate() const;
};

bool dominates(const Objectives& a, const Objectives& b);

/// Fast non-dominated sort; front 0 first, every index in exactly one front.
std::vector<std::vector<int>> non_dominated_sort(const std::vector<Individual>& population);

/// Boundary individuals get infinity; interior ones the normalized neighbor
/// gap summed over objectives. Fronts of size <= 2 are all infinite.
std::vector<double> crowding_distance(const std::vector<Individual>& population,
                                      const std::vector<int>& front);

/// Binary tournament on (rank, crowding), final ties by coin flip.
int tournament_select(const std::vector<Individual>& population, Rng& rng);

struct CrossoverResult {
  Genome child1;
  Genome child2;
  bool fired = false;
};

CrossoverResult crossover(const Genome& p1, const Genome& p2, Rng& rng, const GaConfig& config);
Genome mutate(const Genome& g, Rng& rng, const GaConfig& config);

/// ULH-stratified initial population over the centroid strata and the
/// log-weight boxes.
std::vector<Genome> initial_population(const GaConfig& config, Rng& rng);

/// Batch evaluator: objectives for each (candidate_id, genome), in order.
/// Implementations may parallelize internally but must preserve order.
using BatchEvaluator = std::function<std::vector<Objectives>(
    const std::vector<std::pair<std::int64_t, Genome>>&, int generation)>;

struct EvolveResult {
  std::vector<Individual> final_population;  // ranked, crowding assigned
  std::vector<Individual> archive;           // every evaluation, in candidate order
  std::vector<std::vector<Individual>> generation_fronts;  // rank-0 set per generation
};

/// mu = lambda NSGA-II with elitist (parents + children) truncation.
EvolveResult evolve(const GaConfig& config, const BatchEvaluator& evaluate,
                    const std::vector<Genome>& initial);

/// Non-dominated feasible subset of an archive. Throws EmptyFeasibleSet.
std::vector<Individual> pareto_front(const std::vector<Individual>& archive);

inline constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

}  // namespace codesign
