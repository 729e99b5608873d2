#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/rng.hpp"
#include "bikeshare/scenarios.hpp"

namespace bikeshare {

/// Deterministic construction guide: proxy net desired change per station
/// and its deficit/surplus magnitudes. Exactly one of deficit/surplus is
/// nonzero per station.
struct DemandProxy {
  std::vector<double> expected_demand;  // expected end-of-period level
  std::vector<double> net_change;       // expected_demand - O
  std::vector<double> deficit;          // max(net_change, 0)
  std::vector<double> surplus;          // max(-net_change, 0)

  static DemandProxy from_expected(const Instance& inst, std::vector<double> expected) {
    if (static_cast<int>(expected.size()) != inst.station_count())
      throw Error("expected demand length does not match station count");
    DemandProxy proxy;
    proxy.expected_demand = std::move(expected);
    const int S = inst.station_count();
    proxy.net_change.resize(S);
    proxy.deficit.resize(S);
    proxy.surplus.resize(S);
    for (int i = 0; i < S; ++i) {
      proxy.net_change[i] = proxy.expected_demand[i] - inst.stations[i].initial_stock;
      proxy.deficit[i] = std::max(proxy.net_change[i], 0.0);
      proxy.surplus[i] = std::max(-proxy.net_change[i], 0.0);
    }
    return proxy;
  }

  /// Default estimator: scenario-weighted mean of the requested level O + D.
  static DemandProxy from_scenarios(const Instance& inst, const ScenarioSet& set) {
    const int S = inst.station_count();
    std::vector<double> expected(S, 0.0);
    for (const Scenario& s : set.scenarios)
      for (int i = 0; i < S; ++i)
        expected[i] += s.weight * (inst.stations[i].initial_stock + s.demand[i]);
    return from_expected(inst, std::move(expected));
  }
};

/// Capacity-capped proxy transfer volume for a surplus/deficit pair.
inline double pair_volume(double surplus, double deficit, int truck_capacity) {
  return std::min({surplus, deficit, static_cast<double>(truck_capacity)});
}

enum class ScoreMode { ServiceOnly, InverseDistance, ServicePerDistance };

inline ScoreMode score_mode_for_preset(const std::string& name) {
  if (name == "Dist") return ScoreMode::InverseDistance;
  if (name == "Serv") return ScoreMode::ServiceOnly;
  if (name == "SD") return ScoreMode::ServicePerDistance;
  throw Error("unknown baseline preset: " + name + " (expected Dist, Serv, or SD)");
}

inline std::string to_string(ScoreMode m) {
  switch (m) {
    case ScoreMode::ServiceOnly: return "service";
    case ScoreMode::InverseDistance: return "inverse-distance";
    case ScoreMode::ServicePerDistance: return "service-per-distance";
  }
  return "?";
}

inline ScoreMode parse_score_mode(const std::string& name) {
  if (name == "service") return ScoreMode::ServiceOnly;
  if (name == "inverse-distance") return ScoreMode::InverseDistance;
  if (name == "service-per-distance") return ScoreMode::ServicePerDistance;
  throw Error("unknown score mode: " + name);
}

struct RrcpConfig {
  int m_max = 10;
  double beta_pick = 2.0;
  double beta_drop = 2.0;
  ScoreMode score_mode = ScoreMode::ServicePerDistance;
  double lambda = 1.0;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;

  void validate() const {
    if (m_max < 1) throw Error("m_max must be >= 1");
    if (beta_pick < 0.0 || beta_drop < 0.0) throw Error("beta exponents must be >= 0");
    if (lambda < 0.0) throw Error("lambda must be >= 0");
    if (epsilon <= 0.0) throw Error("epsilon must be > 0");
  }
};

struct GlobeConfig {
  double d1 = -1.0;  // <= 0: resolved to the 75th percentile of nonzero distances
  double d2 = -1.0;
  double gamma = 2.0;
  ScoreMode score_mode = ScoreMode::ServicePerDistance;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;

  void validate() const {
    if (gamma < 0.0) throw Error("gamma must be >= 0");
    if (epsilon <= 0.0) throw Error("epsilon must be > 0");
  }
};

inline RrcpConfig rrcp_preset(const std::string& name) {
  RrcpConfig cfg;
  cfg.score_mode = score_mode_for_preset(name);
  return cfg;
}

inline GlobeConfig globe_preset(const std::string& name) {
  GlobeConfig cfg;
  cfg.score_mode = score_mode_for_preset(name);
  return cfg;
}

/// Nearest-rank 75th percentile of the nonzero pairwise distances; default
/// GLOBE thresholds scale with the instance geometry.
inline double default_distance_threshold(const Instance& inst) {
  std::vector<double> nonzero;
  for (const auto& row : inst.distances)
    for (double d : row)
      if (d > 0.0) nonzero.push_back(d);
  if (nonzero.empty()) return 1.0;
  std::sort(nonzero.begin(), nonzero.end());
  std::size_t rank =
      static_cast<std::size_t>(std::ceil(0.75 * static_cast<double>(nonzero.size())));
  rank = std::clamp<std::size_t>(rank, 1, nonzero.size());
  return nonzero[rank - 1];
}

namespace detail {

/// Samples an index with probability proportional to weights[k].
inline std::size_t roulette(const std::vector<double>& weights, Rng& rng) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double r = rng.uniform01() * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    r -= weights[k];
    if (r <= 0.0) return k;
  }
  return weights.size() - 1;
}

}  // namespace detail

/// Randomized restricted candidate pairing with balanced insertion.
/// Stage 1 matches surplus (pickup) with deficit (drop) stations through a
/// distance-restricted candidate list; stage 2 assigns the pairs in creation
/// order to the truck with the cheapest penalized extension.
inline RoutePlan rrcp_bi(const Instance& inst, const DemandProxy& proxy,
                         const RrcpConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int S = inst.station_count();

  std::vector<int> pickups, drops;
  for (int i = 0; i < S; ++i) {
    if (proxy.surplus[i] > 0.0) pickups.push_back(i);
    if (proxy.deficit[i] > 0.0) drops.push_back(i);
  }

  auto score = [&](int i, int j) {
    const double q = pair_volume(proxy.surplus[i], proxy.deficit[j], inst.truck_capacity);
    switch (cfg.score_mode) {
      case ScoreMode::ServiceOnly: return q;
      case ScoreMode::InverseDistance: return 1.0 / (inst.station_dist(i, j) + cfg.epsilon);
      case ScoreMode::ServicePerDistance: return q / (inst.station_dist(i, j) + cfg.epsilon);
    }
    return 0.0;
  };

  std::vector<std::pair<int, int>> pairs;
  while (!pickups.empty() && !drops.empty()) {
    std::vector<double> pick_w(pickups.size());
    for (std::size_t k = 0; k < pickups.size(); ++k)
      pick_w[k] = std::pow(proxy.surplus[pickups[k]] + cfg.epsilon, cfg.beta_pick);
    const std::size_t pi = detail::roulette(pick_w, rng);
    const int i = pickups[pi];

    // RCL: the m nearest deficit stations to the chosen pickup.
    std::vector<int> rcl(drops);
    const std::size_t m = std::min<std::size_t>(cfg.m_max, rcl.size());
    std::stable_sort(rcl.begin(), rcl.end(),
                     [&](int a, int b) { return inst.station_dist(i, a) < inst.station_dist(i, b); });
    rcl.resize(m);

    std::vector<double> drop_w(rcl.size());
    for (std::size_t k = 0; k < rcl.size(); ++k)
      drop_w[k] = std::pow(score(i, rcl[k]) + cfg.epsilon, cfg.beta_drop);
    const int j = rcl[detail::roulette(drop_w, rng)];

    pairs.emplace_back(i, j);
    pickups.erase(std::find(pickups.begin(), pickups.end(), i));
    drops.erase(std::find(drops.begin(), drops.end(), j));
  }

  RoutePlan plan;
  plan.routes.assign(inst.truck_count, {});
  std::vector<int> last_node(inst.truck_count, 0);  // depot
  std::vector<int> pair_count(inst.truck_count, 0);
  for (const auto& [i, j] : pairs) {
    int best_truck = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int t = 0; t < inst.truck_count; ++t) {
      const double extension = inst.dist(last_node[t], Instance::node_of(i)) +
                               inst.station_dist(i, j) +
                               inst.dist(Instance::node_of(j), 0) -
                               inst.dist(last_node[t], 0);
      const double cost = extension + cfg.lambda * pair_count[t];
      if (cost < best_cost) {
        best_cost = cost;
        best_truck = t;
      }
    }
    plan.routes[best_truck].push_back(i);
    plan.routes[best_truck].push_back(j);
    last_node[best_truck] = Instance::node_of(j);
    ++pair_count[best_truck];
  }

  std::vector<bool> routed(S, false);
  for (const auto& r : plan.routes)
    for (int v : r) routed[v] = true;
  for (int i = 0; i < S; ++i)
    if (!routed[i]) plan.unvisited.push_back(i);
  return plan;
}

/// Global score-biased pair-move greedy: repeatedly samples one feasible
/// (truck, pickup, drop) move under distance thresholds until the candidate
/// set empties. The returned plan may leave stations unvisited.
inline RoutePlan globe(const Instance& inst, const DemandProxy& proxy, GlobeConfig cfg) {
  cfg.validate();
  if (cfg.d1 <= 0.0) cfg.d1 = default_distance_threshold(inst);
  if (cfg.d2 <= 0.0) cfg.d2 = default_distance_threshold(inst);
  Rng rng(cfg.seed);
  const int S = inst.station_count();

  RoutePlan plan;
  plan.routes.assign(inst.truck_count, {});
  std::vector<int> position(inst.truck_count, 0);  // node index, depot at start
  std::vector<bool> visited(S, false);

  struct Move {
    int truck, pickup, drop;
    double volume, distance;
  };

  while (true) {
    std::vector<int> surplus, deficit;
    for (int i = 0; i < S; ++i) {
      if (visited[i]) continue;
      if (proxy.surplus[i] > 0.0) surplus.push_back(i);
      if (proxy.deficit[i] > 0.0) deficit.push_back(i);
    }
    if (surplus.empty() || deficit.empty()) break;

    std::vector<Move> moves;
    for (int t = 0; t < inst.truck_count; ++t)
      for (int i : surplus) {
        if (inst.dist(position[t], Instance::node_of(i)) > cfg.d1) continue;
        for (int j : deficit) {
          if (i == j || inst.station_dist(i, j) > cfg.d2) continue;
          Move m;
          m.truck = t;
          m.pickup = i;
          m.drop = j;
          m.volume = pair_volume(proxy.surplus[i], proxy.deficit[j], inst.truck_capacity);
          m.distance = inst.dist(position[t], Instance::node_of(i)) + inst.station_dist(i, j);
          moves.push_back(m);
        }
      }
    if (moves.empty()) break;

    std::vector<double> weights(moves.size());
    for (std::size_t k = 0; k < moves.size(); ++k) {
      double s = 0.0;
      switch (cfg.score_mode) {
        case ScoreMode::ServiceOnly: s = moves[k].volume; break;
        case ScoreMode::InverseDistance: s = 1.0 / (moves[k].distance + cfg.epsilon); break;
        case ScoreMode::ServicePerDistance:
          s = moves[k].volume / (moves[k].distance + cfg.epsilon);
          break;
      }
      weights[k] = std::pow(s + cfg.epsilon, cfg.gamma);
    }
    const Move& m = moves[detail::roulette(weights, rng)];
    plan.routes[m.truck].push_back(m.pickup);
    plan.routes[m.truck].push_back(m.drop);
    position[m.truck] = Instance::node_of(m.drop);
    visited[m.pickup] = true;
    visited[m.drop] = true;
  }

  for (int i = 0; i < S; ++i)
    if (!visited[i]) plan.unvisited.push_back(i);
  return plan;
}

}  // namespace bikeshare
