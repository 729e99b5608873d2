#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bikeshare/common.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/rng.hpp"

namespace bikeshare {

/// One demand realization: demand[i] is the net desired inventory change at
/// station i (positive = bikes wanted, negative = docks wanted).
struct Scenario {
  std::vector<int> demand;
  double weight = 0.0;
};

/// Target inventory: the requested level projected into [0, L].
inline int target_inventory(int initial_stock, int dock_capacity, int demand) {
  return std::min(dock_capacity, std::max(0, initial_stock + demand));
}

/// Total magnitude of requested changes in one scenario.
inline double demand_intensity(const std::vector<int>& demand) {
  double phi = 0.0;
  for (int d : demand) phi += std::abs(d);
  return phi;
}

/// Nearest-rank empirical quantile: threshold is the ceil(q*N)-th smallest
/// intensity, so the returned subset { h : phi_h >= threshold } is nonempty.
inline std::pair<double, std::vector<int>> high_demand_subset(
    const std::vector<double>& intensities, double quantile = 0.90) {
  if (intensities.empty()) throw Error("high_demand_subset: no scenarios");
  const std::size_t n = intensities.size();
  std::vector<double> sorted(intensities);
  std::sort(sorted.begin(), sorted.end());
  std::size_t rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  const double threshold = sorted[rank - 1];
  std::vector<int> subset;
  for (std::size_t h = 0; h < n; ++h)
    if (intensities[h] >= threshold) subset.push_back(static_cast<int>(h));
  return {threshold, subset};
}

inline std::vector<double> normalize_high_demand_weights(const std::vector<double>& weights,
                                                         const std::vector<int>& subset) {
  if (subset.empty()) throw Error("normalize_high_demand_weights: empty subset");
  double total = 0.0;
  for (int h : subset) total += weights[h];
  if (total <= 0.0) throw Error("normalize_high_demand_weights: zero total weight over subset");
  std::vector<double> tilde;
  tilde.reserve(subset.size());
  for (int h : subset) tilde.push_back(weights[h] / total);
  return tilde;
}

/// A fixed scenario set plus every scenario-derived quantity the objectives
/// need: targets, intensities, the high-demand subset and its weights.
struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::vector<std::vector<int>> targets;  // targets[h][i]
  std::vector<double> intensities;
  double percentile_threshold = 0.0;
  std::vector<int> high_demand_ids;
  std::vector<double> tilde_weights;  // aligned with high_demand_ids

  int scenario_count() const { return static_cast<int>(scenarios.size()); }
  int station_count() const {
    return scenarios.empty() ? 0 : static_cast<int>(scenarios.front().demand.size());
  }

  /// Derives all cached fields from raw demands/weights. Weights are
  /// normalized to sum to 1; nonpositive totals are rejected.
  static ScenarioSet build(const Instance& inst, std::vector<Scenario> raw,
                           double quantile = 0.90) {
    if (raw.empty()) throw Error("scenario set must contain at least one scenario");
    const int S = inst.station_count();
    double total = 0.0;
    for (std::size_t h = 0; h < raw.size(); ++h) {
      if (static_cast<int>(raw[h].demand.size()) != S)
        throw Error("scenario " + std::to_string(h) + " has demand length " +
                    std::to_string(raw[h].demand.size()) + ", expected " + std::to_string(S));
      if (raw[h].weight < 0.0)
        throw Error("scenario " + std::to_string(h) + " has negative weight");
      total += raw[h].weight;
    }
    if (total <= 0.0) throw Error("scenario weights must have positive total");
    for (Scenario& s : raw) s.weight /= total;

    ScenarioSet set;
    set.scenarios = std::move(raw);
    set.targets.reserve(set.scenarios.size());
    set.intensities.reserve(set.scenarios.size());
    for (const Scenario& s : set.scenarios) {
      std::vector<int> tau(S);
      for (int i = 0; i < S; ++i)
        tau[i] = target_inventory(inst.stations[i].initial_stock,
                                  inst.stations[i].dock_capacity, s.demand[i]);
      set.targets.push_back(std::move(tau));
      set.intensities.push_back(demand_intensity(s.demand));
    }
    auto [threshold, subset] = high_demand_subset(set.intensities, quantile);
    set.percentile_threshold = threshold;
    set.high_demand_ids = std::move(subset);
    std::vector<double> weights;
    weights.reserve(set.scenarios.size());
    for (const Scenario& s : set.scenarios) weights.push_back(s.weight);
    set.tilde_weights = normalize_high_demand_weights(weights, set.high_demand_ids);
    return set;
  }
};

struct DemandModel {
  double mean_span = 4.0;  // per-station mean drawn uniformly in [-span, span]
  double sigma = 3.0;      // per-scenario dispersion around the station mean

  void validate() const {
    if (mean_span < 0.0) throw Error("mean_span must be >= 0");
    if (sigma < 0.0) throw Error("sigma must be >= 0");
  }
};

/// Synthetic scenario sampler with uniform weights. Per-station demand is an
/// integer draw around a seeded station mean, clamped so |D| <= L_i.
inline ScenarioSet sample_scenarios(std::uint64_t seed, const Instance& inst, int count,
                                    const DemandModel& model = {}) {
  if (count < 1) throw Error("scenario count must be >= 1");
  model.validate();
  Rng rng(seed);
  const int S = inst.station_count();
  std::vector<double> means(S);
  for (int i = 0; i < S; ++i) means[i] = (2.0 * rng.uniform01() - 1.0) * model.mean_span;
  std::vector<Scenario> raw(count);
  for (Scenario& s : raw) {
    s.weight = 1.0 / static_cast<double>(count);
    s.demand.resize(S);
    for (int i = 0; i < S; ++i) {
      const int cap = inst.stations[i].dock_capacity;
      const double draw = model.sigma > 0.0 ? rng.normal(means[i], model.sigma) : means[i];
      s.demand[i] = std::clamp(static_cast<int>(std::lround(draw)), -cap, cap);
    }
  }
  return ScenarioSet::build(inst, std::move(raw));
}

/// Disjoint train/validation partition with renormalized weights per side.
inline std::pair<ScenarioSet, ScenarioSet> split_train_validation(std::uint64_t seed,
                                                                  const Instance& inst,
                                                                  const ScenarioSet& pool,
                                                                  double ratio = 0.8) {
  const int n = pool.scenario_count();
  if (n < 2) throw Error("scenario pool too small to split (need >= 2)");
  int train_size = static_cast<int>(std::floor(ratio * static_cast<double>(n)));
  train_size = std::clamp(train_size, 1, n - 1);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.index(static_cast<std::size_t>(i) + 1)]);
  std::vector<Scenario> train, validation;
  for (int k = 0; k < n; ++k) {
    const Scenario& s = pool.scenarios[idx[k]];
    (k < train_size ? train : validation).push_back(s);
  }
  return {ScenarioSet::build(inst, std::move(train)),
          ScenarioSet::build(inst, std::move(validation))};
}

inline nlohmann::json scenarios_to_json(const ScenarioSet& set) {
  nlohmann::json demands = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  for (const Scenario& s : set.scenarios) {
    demands.push_back(s.demand);
    weights.push_back(s.weight);
  }
  return nlohmann::json{{"weights", std::move(weights)}, {"demands", std::move(demands)}};
}

inline ScenarioSet scenarios_from_json(const nlohmann::json& j, const Instance& inst) {
  try {
    const auto& demands = j.at("demands");
    std::vector<Scenario> raw;
    raw.reserve(demands.size());
    for (const auto& d : demands) {
      Scenario s;
      s.demand = d.get<std::vector<int>>();
      s.weight = 1.0;
      raw.push_back(std::move(s));
    }
    if (j.contains("weights")) {
      const auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != raw.size())
        throw Error("scenario file: weights length does not match demands");
      for (std::size_t h = 0; h < raw.size(); ++h) raw[h].weight = w[h];
    }
    return ScenarioSet::build(inst, std::move(raw));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scenario parse failure: ") + e.what());
  }
}

inline ScenarioSet load_scenarios(const std::string& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("scenario parse failure in " + path + ": " + e.what());
  }
  return scenarios_from_json(j, inst);
}

inline void save_scenarios(const ScenarioSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file: " + path);
  out << scenarios_to_json(set).dump(2) << '\n';
}

}  // namespace bikeshare
