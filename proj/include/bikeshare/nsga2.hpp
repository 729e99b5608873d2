#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/evaluator.hpp"
#include "bikeshare/metrics.hpp"
#include "bikeshare/rng.hpp"
#include "bikeshare/variation.hpp"

namespace bikeshare {

struct Individual {
  Genome genome;
  Objectives objectives;
  int rank = 0;
  double crowding = 0.0;
};

/// Fast non-dominated sort: partitions indices into fronts F1, F2, ...
inline std::vector<std::vector<int>> non_dominated_sort(const std::vector<Objectives>& objs) {
  const int n = static_cast<int>(objs.size());
  std::vector<std::vector<int>> dominated(n);
  std::vector<int> domination_count(n, 0);
  std::vector<std::vector<int>> fronts(1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (dominates(objs[a], objs[b]))
        dominated[a].push_back(b);
      else if (dominates(objs[b], objs[a]))
        ++domination_count[a];
    }
    if (domination_count[a] == 0) fronts[0].push_back(a);
  }
  std::size_t k = 0;
  while (!fronts[k].empty()) {
    std::vector<int> next;
    for (int a : fronts[k])
      for (int b : dominated[a])
        if (--domination_count[b] == 0) next.push_back(b);
    fronts.push_back(std::move(next));
    ++k;
  }
  fronts.pop_back();
  return fronts;
}

/// Crowding distance within one front. Boundary individuals per objective
/// get +inf; zero-range objectives contribute nothing.
inline std::vector<double> crowding_distance(const std::vector<Objectives>& front) {
  const int n = static_cast<int>(front.size());
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  auto component = [](const Objectives& o, int k) {
    return k == 0 ? o.f1 : (k == 1 ? o.f2 : o.f3);
  };
  std::vector<int> order(n);
  for (int k = 0; k < 3; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return component(front[a], k) < component(front[b], k);
    });
    const double range = component(front[order.back()], k) - component(front[order.front()], k);
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    if (range <= 0.0) continue;
    for (int i = 1; i + 1 < n; ++i)
      dist[order[i]] +=
          (component(front[order[i + 1]], k) - component(front[order[i - 1]], k)) / range;
  }
  return dist;
}

struct RunConfig {
  int mu = 200;
  int generations = 500;
  OperatorConfig operators;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // Recomputing the cumulative-archive hypervolume every generation is the
  // dominant cost on large campaigns; it only feeds the stats stream and can
  // be switched off without affecting the search trajectory.
  bool track_archive_hypervolume = true;

  void validate() const {
    if (mu < 4 || mu % 2 != 0) throw Error("population size must be even and >= 4");
    if (generations < 1) throw Error("generations must be >= 1");
    operators.validate();
  }
};

struct GenerationStats {
  int generation = 0;
  double best_f1 = 0.0;
  double best_f2 = 0.0;
  double best_f3 = 0.0;
  std::size_t archive_size = 0;
  double archive_hypervolume = 0.0;
};

struct RunResult {
  FrontArchive front;                 // final population's first front
  std::vector<GenerationStats> stats;
  std::vector<Individual> population;
  Point3 stats_reference_point{};     // fixed at generation 0 for the HV stream
};

namespace detail {

inline void assign_rank_and_crowding(std::vector<Individual>& pop) {
  std::vector<Objectives> objs(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) objs[i] = pop[i].objectives;
  const auto fronts = non_dominated_sort(objs);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<Objectives> front_objs;
    front_objs.reserve(fronts[f].size());
    for (int i : fronts[f]) front_objs.push_back(objs[i]);
    const std::vector<double> crowd = crowding_distance(front_objs);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      pop[fronts[f][k]].rank = static_cast<int>(f);
      pop[fronts[f][k]].crowding = crowd[k];
    }
  }
}

inline const Individual& tournament(const std::vector<Individual>& pop, Rng& rng) {
  const Individual& a = pop[rng.index(pop.size())];
  const Individual& b = pop[rng.index(pop.size())];
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  return a.crowding >= b.crowding ? a : b;
}

/// (mu + lambda) environmental selection: whole fronts while they fit, then
/// the last front truncated by descending crowding (stable on ties).
inline std::vector<Individual> environmental_selection(std::vector<Individual> combined,
                                                       int mu) {
  std::vector<Objectives> objs(combined.size());
  for (std::size_t i = 0; i < combined.size(); ++i) objs[i] = combined[i].objectives;
  const auto fronts = non_dominated_sort(objs);
  std::vector<Individual> next;
  next.reserve(mu);
  for (std::size_t f = 0; f < fronts.size() && static_cast<int>(next.size()) < mu; ++f) {
    std::vector<Objectives> front_objs;
    front_objs.reserve(fronts[f].size());
    for (int i : fronts[f]) front_objs.push_back(objs[i]);
    const std::vector<double> crowd = crowding_distance(front_objs);
    std::vector<std::size_t> order(fronts[f].size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
    for (std::size_t k : order) {
      if (static_cast<int>(next.size()) >= mu) break;
      Individual ind = std::move(combined[fronts[f][k]]);
      ind.rank = static_cast<int>(f);
      ind.crowding = crowd[k];
      next.push_back(std::move(ind));
    }
  }
  return next;
}

}  // namespace detail

/// Full NSGA-II run. Selection and variation happen on the master rng in a
/// fixed order; offspring evaluation is pure and fans out positionally, so
/// the trajectory is identical at any worker count.
inline RunResult run_nsga2(const Instance& inst, const ScenarioSet& set,
                           const RunConfig& config, const std::string& provenance = "nsga2") {
  config.validate();
  const int S = inst.station_count();
  const int T = inst.truck_count;
  const OperatorConfig& ops = config.operators;
  Rng rng(config.seed);

  std::vector<Individual> pop(config.mu);
  for (Individual& ind : pop) ind.genome = random_genome(rng, S, T);
  parallel_for(pop.size(), config.workers,
               [&](std::size_t i) { pop[i].objectives = evaluate(pop[i].genome, inst, set); });
  detail::assign_rank_and_crowding(pop);

  RunResult result;
  Point3 ref{0.0, 0.0, 0.0};
  for (const Individual& ind : pop) {
    ref[0] = std::max(ref[0], ind.objectives.f1);
    ref[1] = std::max(ref[1], ind.objectives.f2);
    ref[2] = std::max(ref[2], ind.objectives.f3);
  }
  for (int k = 0; k < 3; ++k) ref[k] = ref[k] > 0.0 ? ref[k] * 1.01 : ref[k] + 1.0;
  result.stats_reference_point = ref;

  FrontArchive cumulative;
  auto record = [&](int generation) {
    for (const Individual& ind : pop)
      if (ind.rank == 0) cumulative.insert({ind.objectives, ind.genome, provenance});
    GenerationStats gs;
    gs.generation = generation;
    gs.best_f1 = std::numeric_limits<double>::infinity();
    gs.best_f2 = std::numeric_limits<double>::infinity();
    gs.best_f3 = std::numeric_limits<double>::infinity();
    for (const Individual& ind : pop) {
      gs.best_f1 = std::min(gs.best_f1, ind.objectives.f1);
      gs.best_f2 = std::min(gs.best_f2, ind.objectives.f2);
      gs.best_f3 = std::min(gs.best_f3, ind.objectives.f3);
    }
    gs.archive_size = cumulative.size();
    if (config.track_archive_hypervolume)
      gs.archive_hypervolume = hypervolume(archive_points(cumulative), ref);
    result.stats.push_back(gs);
  };
  record(0);

  std::vector<Individual> offspring(config.mu);
  for (int gen = 1; gen <= config.generations; ++gen) {
    for (int k = 0; k < config.mu; k += 2) {
      const Individual& pa = detail::tournament(pop, rng);
      const Individual& pb = detail::tournament(pop, rng);
      Genome ca = pa.genome;
      Genome cb = pb.genome;
      if (rng.uniform01() < ops.crossover_prob) {
        auto [perm_a, perm_b] = crossover(ops.crossover, pa.genome.perm, pb.genome.perm, rng);
        ca.perm = std::move(perm_a);
        cb.perm = std::move(perm_b);
      }
      for (Genome* child : {&ca, &cb}) {
        if (rng.uniform01() < ops.perm_mutation_prob)
          mutate_perm(ops.perm_mutation, child->perm, rng, ops.block_length);
        if (rng.uniform01() < ops.domain_mutation_prob)
          *child = mutate_domain(ops.domain_mutation, std::move(*child), rng, ops, inst);
      }
      offspring[k].genome = std::move(ca);
      offspring[k + 1].genome = std::move(cb);
    }
    parallel_for(offspring.size(), config.workers, [&](std::size_t i) {
      offspring[i].objectives = evaluate(offspring[i].genome, inst, set);
    });
    std::vector<Individual> combined;
    combined.reserve(pop.size() + offspring.size());
    for (Individual& ind : pop) combined.push_back(std::move(ind));
    for (Individual& ind : offspring) combined.push_back(ind);
    pop = detail::environmental_selection(std::move(combined), config.mu);
    record(gen);
  }

  for (const Individual& ind : pop)
    if (ind.rank == 0) result.front.insert({ind.objectives, ind.genome, provenance});
  result.population = std::move(pop);
  return result;
}

}  // namespace bikeshare
