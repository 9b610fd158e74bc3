#include "codesign/nsga2.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/design_space.hpp"

namespace codesign {

ControlWeights Genome::to_weights() const {
  ControlWeights w;
  for (int i = 0; i < 8; ++i) w[i] = std::pow(10.0, weight_genes[i]);
  return w;
}

void GaConfig::validate() const {
  if (population < 2 || population % 2 != 0) throw InvalidRange("population must be even and >= 2");
  if (generations < 0) throw InvalidRange("generations must be >= 0");
  if (crossover_prob < 0.0 || crossover_prob > 1.0) throw InvalidRange("crossover_prob in [0,1]");
  if (mutation_prob < 0.0 || mutation_prob > 1.0) throw InvalidRange("mutation_prob in [0,1]");
  if (k < 1) throw InvalidRange("cluster count must be >= 1");
  for (const auto& [lo, hi] : weight_bounds) {
    if (!(lo <= hi)) throw InvalidRange("weight bounds must satisfy lo <= hi");
  }
}

bool dominates(const Objectives& a, const Objectives& b) {
  const bool no_worse = a.mse_total <= b.mse_total && a.energy <= b.energy;
  const bool strictly_better = a.mse_total < b.mse_total || a.energy < b.energy;
  return no_worse && strictly_better;
}

std::vector<std::vector<int>> non_dominated_sort(const std::vector<Individual>& population) {
  const int n = static_cast<int>(population.size());
  std::vector<std::vector<int>> dominated(n);
  std::vector<int> domination_count(n, 0);
  std::vector<std::vector<int>> fronts(1);

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(population[p].objectives, population[q].objectives)) {
        dominated[p].push_back(q);
      } else if (dominates(population[q].objectives, population[p].objectives)) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }

  int current = 0;
  while (!fronts[current].empty()) {
    std::vector<int> next;
    for (int p : fronts[current]) {
      for (int q : dominated[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    ++current;
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& population,
                                      const std::vector<int>& front) {
  const int m = static_cast<int>(front.size());
  std::vector<double> distance(m, 0.0);
  if (m <= 2) {
    std::fill(distance.begin(), distance.end(), kInfiniteCrowding);
    return distance;
  }

  std::vector<int> order(m);
  for (int obj = 0; obj < 2; ++obj) {
    auto value = [&](int i) {
      const Objectives& o = population[front[i]].objectives;
      return obj == 0 ? o.mse_total : o.energy;
    };
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return value(a) < value(b); });
    distance[order[0]] = kInfiniteCrowding;
    distance[order[m - 1]] = kInfiniteCrowding;
    const double span = value(order[m - 1]) - value(order[0]);
    if (span <= 0.0) continue;  // degenerate objective contributes nothing
    for (int i = 1; i + 1 < m; ++i) {
      if (distance[order[i]] == kInfiniteCrowding) continue;
      distance[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / span;
    }
  }
  return distance;
}

int tournament_select(const std::vector<Individual>& population, Rng& rng) {
  const int n = static_cast<int>(population.size());
  const int a = rng.uniform_index(n);
  const int b = rng.uniform_index(n);
  if (population[a].rank != population[b].rank) {
    return population[a].rank < population[b].rank ? a : b;
  }
  if (population[a].crowding != population[b].crowding) {
    return population[a].crowding > population[b].crowding ? a : b;
  }
  return rng.uniform() < 0.5 ? a : b;
}

namespace {

double polynomial_mutation(double x, double lo, double hi, double eta, Rng& rng) {
  if (hi <= lo) return x;
  const double u = rng.uniform();
  const double span = hi - lo;
  double delta;
  if (u < 0.5) {
    const double d = (x - lo) / span;
    delta = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d, eta + 1.0), 1.0 / (eta + 1.0)) - 1.0;
  } else {
    const double d = (hi - x) / span;
    delta = 1.0 - std::pow(2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(1.0 - d, eta + 1.0),
                           1.0 / (eta + 1.0));
  }
  return std::clamp(x + delta * span, lo, hi);
}

}  // namespace

CrossoverResult crossover(const Genome& p1, const Genome& p2, Rng& rng, const GaConfig& config) {
  CrossoverResult out{p1, p2, false};
  if (rng.uniform() >= config.crossover_prob) return out;
  out.fired = true;
  for (int i = 0; i < 8; ++i) {
    const auto [lo, hi] = config.weight_bounds[i];
    // One spread draw per gene; both children come from the same pairing.
    const double u = rng.uniform();
    double beta;
    if (u <= 0.5) {
      beta = std::pow(2.0 * u, 1.0 / (config.sbx_eta + 1.0));
    } else {
      beta = std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (config.sbx_eta + 1.0));
    }
    const double mean = 0.5 * (p1.weight_genes[i] + p2.weight_genes[i]);
    const double diff = 0.5 * std::abs(p2.weight_genes[i] - p1.weight_genes[i]);
    out.child1.weight_genes[i] = std::clamp(mean - beta * diff, lo, hi);
    out.child2.weight_genes[i] = std::clamp(mean + beta * diff, lo, hi);
  }
  if (rng.uniform() < 0.5) std::swap(out.child1.centroid_gene, out.child2.centroid_gene);
  return out;
}

Genome mutate(const Genome& g, Rng& rng, const GaConfig& config) {
  Genome out = g;
  if (rng.uniform() < config.mutation_prob) {
    out.centroid_gene = rng.uniform_index(config.k);
  }
  for (int i = 0; i < 8; ++i) {
    if (rng.uniform() < config.mutation_prob) {
      const auto [lo, hi] = config.weight_bounds[i];
      out.weight_genes[i] = polynomial_mutation(out.weight_genes[i], lo, hi, config.pm_eta, rng);
    }
  }
  return out;
}

std::vector<Genome> initial_population(const GaConfig& config, Rng& rng) {
  const int n = config.population;
  const Eigen::MatrixXd unit = latin_hypercube_unit(n, 9, rng);
  std::vector<Genome> genomes(n);
  for (int i = 0; i < n; ++i) {
    genomes[i].centroid_gene = std::min(config.k - 1, static_cast<int>(unit(i, 0) * config.k));
    for (int d = 0; d < 8; ++d) {
      const auto [lo, hi] = config.weight_bounds[d];
      genomes[i].weight_genes[d] = lo + unit(i, d + 1) * (hi - lo);
    }
  }
  return genomes;
}

namespace {

void rank_population(std::vector<Individual>& population) {
  const auto fronts = non_dominated_sort(population);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const auto distances = crowding_distance(population, fronts[f]);
    for (std::size_t i = 0; i < fronts[f].size(); ++i) {
      population[fronts[f][i]].rank = static_cast<int>(f);
      population[fronts[f][i]].crowding = distances[i];
    }
  }
}

std::vector<Individual> evaluate_genomes(const std::vector<Genome>& genomes,
                                         const BatchEvaluator& evaluate, std::int64_t first_id,
                                         int generation) {
  std::vector<std::pair<std::int64_t, Genome>> batch;
  batch.reserve(genomes.size());
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    batch.emplace_back(first_id + static_cast<std::int64_t>(i), genomes[i]);
  }
  std::vector<Objectives> objectives;
  try {
    objectives = evaluate(batch, generation);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluatorFailure(e.what());
  }
  if (objectives.size() != genomes.size()) {
    throw EvaluatorFailure("evaluator returned wrong batch size");
  }
  std::vector<Individual> out(genomes.size());
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    out[i].genome = genomes[i];
    out[i].objectives = objectives[i];
    out[i].candidate_id = batch[i].first;
  }
  return out;
}

}  // namespace

EvolveResult evolve(const GaConfig& config, const BatchEvaluator& evaluate,
                    const std::vector<Genome>& initial) {
  config.validate();
  if (static_cast<int>(initial.size()) != config.population) {
    throw InvalidRange("initial population size mismatch");
  }

  EvolveResult result;
  Rng rng(derive_seed(config.seed, "nsga2"));
  std::int64_t next_id = 0;

  std::vector<Individual> population = evaluate_genomes(initial, evaluate, next_id, 0);
  next_id += population.size();
  result.archive.insert(result.archive.end(), population.begin(), population.end());
  rank_population(population);

  for (int gen = 1; gen <= config.generations; ++gen) {
    std::vector<Genome> offspring;
    offspring.reserve(config.population);
    while (static_cast<int>(offspring.size()) < config.population) {
      const Genome& p1 = population[tournament_select(population, rng)].genome;
      const Genome& p2 = population[tournament_select(population, rng)].genome;
      CrossoverResult crossed = crossover(p1, p2, rng, config);
      offspring.push_back(mutate(crossed.child1, rng, config));
      if (static_cast<int>(offspring.size()) < config.population) {
        offspring.push_back(mutate(crossed.child2, rng, config));
      }
    }

    std::vector<Individual> children = evaluate_genomes(offspring, evaluate, next_id, gen);
    next_id += children.size();
    result.archive.insert(result.archive.end(), children.begin(), children.end());

    // mu + lambda elitist truncation.
    std::vector<Individual> combined = population;
    combined.insert(combined.end(), children.begin(), children.end());
    const auto fronts = non_dominated_sort(combined);
    std::vector<Individual> next_population;
    next_population.reserve(config.population);
    for (const std::vector<int>& front : fronts) {
      const auto distances = crowding_distance(combined, front);
      if (static_cast<int>(next_population.size() + front.size()) <= config.population) {
        for (std::size_t i = 0; i < front.size(); ++i) {
          Individual ind = combined[front[i]];
          ind.crowding = distances[i];
          next_population.push_back(std::move(ind));
        }
      } else {
        std::vector<int> order(front.size());
        for (std::size_t i = 0; i < front.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return distances[a] > distances[b]; });
        for (int idx : order) {
          if (static_cast<int>(next_population.size()) >= config.population) break;
          Individual ind = combined[front[idx]];
          ind.crowding = distances[idx];
          next_population.push_back(std::move(ind));
        }
      }
      if (static_cast<int>(next_population.size()) >= config.population) break;
    }
    population = std::move(next_population);
    rank_population(population);

    std::vector<Individual> front0;
    for (const Individual& ind : population) {
      if (ind.rank == 0) front0.push_back(ind);
    }
    result.generation_fronts.push_back(std::move(front0));
  }

  result.final_population = std::move(population);
  return result;
}

std::vector<Individual> pareto_front(const std::vector<Individual>& archive) {
  if (archive.empty()) throw EmptyFeasibleSet("empty archive");
  std::vector<Individual> feasible;
  for (const Individual& ind : archive) {
    if (ind.objectives.feasible) feasible.push_back(ind);
  }
  if (feasible.empty()) throw EmptyFeasibleSet("no feasible evaluation in the archive");

  std::vector<Individual> front;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    bool is_dominated = false;
    for (std::size_t j = 0; j < feasible.size(); ++j) {
      if (i == j) continue;
      if (dominates(feasible[j].objectives, feasible[i].objectives)) {
        is_dominated = true;
        break;
      }
    }
    if (!is_dominated) front.push_back(feasible[i]);
  }
  return front;
}

}  // namespace codesign
