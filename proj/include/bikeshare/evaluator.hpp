#pragma once

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "bikeshare/encoding.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/scenarios.hpp"

namespace bikeshare {

struct Objectives {
  double f1 = 0.0;  // total travel distance
  double f2 = 0.0;  // scenario-weighted unmet demand
  double f3 = 0.0;  // unmet demand over the high-demand subset

  bool operator==(const Objectives&) const = default;
};

struct ScenarioResult {
  std::vector<int> unmet;     // per-station U_{i,h}
  std::vector<int> transfer;  // executed y at each station (0 if unvisited)
  long long total = 0;        // U_h
};

/// Recourse simulation of one scenario. Trucks run independently (station
/// sets are disjoint); at each visit the executed transfer is the desired
/// change clamped to the interval allowed by truck load and dock space.
inline ScenarioResult simulate_scenario(const RoutePlan& plan, const Instance& inst,
                                        const ScenarioSet& set, int scenario) {
  const int S = inst.station_count();
  const int C = inst.truck_capacity;
  const std::vector<int>& tau = set.targets[scenario];

  ScenarioResult res;
  res.unmet.resize(S);
  res.transfer.assign(S, 0);
  std::vector<int> stock(S);
  std::vector<bool> visited(S, false);
  for (int i = 0; i < S; ++i) stock[i] = inst.stations[i].initial_stock;

  for (const auto& route : plan.routes) {
    int load = 0;
    for (int i : route) {
      visited[i] = true;
      const int delta = tau[i] - stock[i];
      const int lo = -std::min(C - load, stock[i]);
      const int hi = std::min(load, inst.stations[i].dock_capacity - stock[i]);
      const int y = std::clamp(delta, lo, hi);
      stock[i] += y;
      load -= y;
      assert(stock[i] >= 0 && stock[i] <= inst.stations[i].dock_capacity);
      assert(load >= 0 && load <= C);
      res.transfer[i] = y;
      res.unmet[i] = std::abs(delta - y);
    }
  }
  for (int i = 0; i < S; ++i) {
    if (!visited[i]) res.unmet[i] = std::abs(tau[i] - inst.stations[i].initial_stock);
    res.total += res.unmet[i];
  }
  return res;
}

inline double objective_distance(const RoutePlan& plan, const Instance& inst) {
  double d = 0.0;
  for (const auto& r : plan.routes) d += route_distance(r, inst);
  return d;
}

namespace detail {

inline std::vector<long long> scenario_totals(const RoutePlan& plan, const Instance& inst,
                                              const ScenarioSet& set) {
  std::vector<long long> totals(set.scenario_count());
  for (int h = 0; h < set.scenario_count(); ++h)
    totals[h] = simulate_scenario(plan, inst, set, h).total;
  return totals;
}

inline double weighted_unmet(const std::vector<long long>& totals, const ScenarioSet& set) {
  double f2 = 0.0;
  for (int h = 0; h < set.scenario_count(); ++h)
    f2 += set.scenarios[h].weight * static_cast<double>(totals[h]);
  return f2;
}

inline double weighted_unmet_high(const std::vector<long long>& totals,
                                  const ScenarioSet& set) {
  double f3 = 0.0;
  for (std::size_t k = 0; k < set.high_demand_ids.size(); ++k)
    f3 += set.tilde_weights[k] * static_cast<double>(totals[set.high_demand_ids[k]]);
  return f3;
}

}  // namespace detail

inline double objective_unmet(const RoutePlan& plan, const Instance& inst,
                              const ScenarioSet& set) {
  return detail::weighted_unmet(detail::scenario_totals(plan, inst, set), set);
}

inline double objective_unmet_high(const RoutePlan& plan, const Instance& inst,
                                   const ScenarioSet& set) {
  return detail::weighted_unmet_high(detail::scenario_totals(plan, inst, set), set);
}

inline Objectives evaluate_plan(const RoutePlan& plan, const Instance& inst,
                                const ScenarioSet& set) {
  const std::vector<long long> totals = detail::scenario_totals(plan, inst, set);
  return {objective_distance(plan, inst), detail::weighted_unmet(totals, set),
          detail::weighted_unmet_high(totals, set)};
}

/// Pure tri-objective evaluation: decode once, simulate each scenario once.
inline Objectives evaluate(const Genome& genome, const Instance& inst,
                           const ScenarioSet& set) {
  return evaluate_plan(decode(genome), inst, set);
}

struct EvaluationDetail {
  Objectives objectives;
  std::vector<ScenarioResult> per_scenario;
};

inline EvaluationDetail evaluate_detailed(const Genome& genome, const Instance& inst,
                                          const ScenarioSet& set) {
  const RoutePlan plan = decode(genome);
  EvaluationDetail detail;
  detail.per_scenario.reserve(set.scenario_count());
  std::vector<long long> totals(set.scenario_count());
  for (int h = 0; h < set.scenario_count(); ++h) {
    detail.per_scenario.push_back(simulate_scenario(plan, inst, set, h));
    totals[h] = detail.per_scenario.back().total;
  }
  detail.objectives = {objective_distance(plan, inst), detail::weighted_unmet(totals, set),
                       detail::weighted_unmet_high(totals, set)};
  return detail;
}

}  // namespace bikeshare
