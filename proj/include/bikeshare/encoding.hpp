#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "bikeshare/common.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/rng.hpp"

namespace bikeshare {

/// Permutation-partition encoding: perm is a permutation of station ids,
/// seg_lengths splits it into T truck routes plus one trailing unvisited
/// segment. Any nonnegative seg_lengths summing to S is feasible, so no
/// operator needs a repair step.
struct Genome {
  std::vector<int> perm;
  std::vector<int> seg_lengths;  // size T+1, sums to S

  int station_count() const { return static_cast<int>(perm.size()); }
  int truck_count() const { return static_cast<int>(seg_lengths.size()) - 1; }
  int unvisited_segment() const { return truck_count(); }

  bool operator==(const Genome&) const = default;
};

struct RoutePlan {
  std::vector<std::vector<int>> routes;
  std::vector<int> unvisited;

  int trucks_used() const {
    int n = 0;
    for (const auto& r : routes)
      if (!r.empty()) ++n;
    return n;
  }
};

/// One 1-0 relocate: take the station at src_pos of segment src_seg and
/// insert it at ins_pos of the distinct segment dst_seg.
struct RelocateMove {
  int src_seg = 0;
  int dst_seg = 0;
  int src_pos = 0;
  int ins_pos = 0;
};

inline bool genome_is_valid(const Genome& g) {
  const int s = g.station_count();
  if (g.seg_lengths.empty()) return false;
  int sum = 0;
  for (int len : g.seg_lengths) {
    if (len < 0) return false;
    sum += len;
  }
  if (sum != s) return false;
  std::vector<bool> seen(s, false);
  for (int v : g.perm) {
    if (v < 0 || v >= s || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline void validate_genome(const Genome& g) {
  if (!genome_is_valid(g)) throw Error("corrupt genome: not a permutation-partition");
}

/// Start offset of each segment within perm (size T+2; last entry == S).
inline std::vector<int> segment_offsets(const Genome& g) {
  std::vector<int> off(g.seg_lengths.size() + 1, 0);
  for (std::size_t k = 0; k < g.seg_lengths.size(); ++k) off[k + 1] = off[k] + g.seg_lengths[k];
  return off;
}

inline RoutePlan decode(const Genome& g) {
  validate_genome(g);
  RoutePlan plan;
  const std::vector<int> off = segment_offsets(g);
  const int trucks = g.truck_count();
  plan.routes.reserve(trucks);
  for (int t = 0; t < trucks; ++t)
    plan.routes.emplace_back(g.perm.begin() + off[t], g.perm.begin() + off[t + 1]);
  plan.unvisited.assign(g.perm.begin() + off[trucks], g.perm.end());
  return plan;
}

inline Genome encode(const RoutePlan& plan) {
  Genome g;
  for (const auto& r : plan.routes) {
    g.perm.insert(g.perm.end(), r.begin(), r.end());
    g.seg_lengths.push_back(static_cast<int>(r.size()));
  }
  g.perm.insert(g.perm.end(), plan.unvisited.begin(), plan.unvisited.end());
  g.seg_lengths.push_back(static_cast<int>(plan.unvisited.size()));
  return g;
}

inline bool plan_is_valid(const RoutePlan& plan, int station_count) {
  std::vector<int> seen(station_count, 0);
  auto mark = [&](int v) {
    if (v < 0 || v >= station_count) return false;
    return ++seen[v] == 1;
  };
  for (const auto& r : plan.routes)
    for (int v : r)
      if (!mark(v)) return false;
  for (int v : plan.unvisited)
    if (!mark(v)) return false;
  return std::accumulate(seen.begin(), seen.end(), 0) == station_count;
}

/// Depot-to-depot length of one route (0 for the empty route).
inline double route_distance(const std::vector<int>& route, const Instance& inst) {
  if (route.empty()) return 0.0;
  double d = inst.dist(0, Instance::node_of(route.front()));
  for (std::size_t j = 0; j + 1 < route.size(); ++j)
    d += inst.dist(Instance::node_of(route[j]), Instance::node_of(route[j + 1]));
  d += inst.dist(Instance::node_of(route.back()), 0);
  return d;
}

inline void apply_relocate_inplace(Genome& g, const RelocateMove& m) {
  const int segs = static_cast<int>(g.seg_lengths.size());
  if (m.src_seg < 0 || m.src_seg >= segs || m.dst_seg < 0 || m.dst_seg >= segs ||
      m.src_seg == m.dst_seg)
    throw Error("relocate move: invalid segment pair");
  if (m.src_pos < 0 || m.src_pos >= g.seg_lengths[m.src_seg])
    throw Error("relocate move: source position out of range");
  if (m.ins_pos < 0 || m.ins_pos > g.seg_lengths[m.dst_seg])
    throw Error("relocate move: insertion position out of range");
  const std::vector<int> off = segment_offsets(g);
  const int station = g.perm[off[m.src_seg] + m.src_pos];
  g.perm.erase(g.perm.begin() + off[m.src_seg] + m.src_pos);
  int dst_start = off[m.dst_seg];
  if (m.dst_seg > m.src_seg) --dst_start;
  g.perm.insert(g.perm.begin() + dst_start + m.ins_pos, station);
  --g.seg_lengths[m.src_seg];
  ++g.seg_lengths[m.dst_seg];
}

inline Genome apply_relocate(Genome g, const RelocateMove& m) {
  apply_relocate_inplace(g, m);
  return g;
}

/// Every single-station relocation from src_seg into dst_seg:
/// |src| * (|dst|+1) moves. Empty source yields an empty list.
inline std::vector<RelocateMove> enumerate_relocations(const Genome& g, int src_seg,
                                                       int dst_seg) {
  std::vector<RelocateMove> moves;
  const int src_len = g.seg_lengths[src_seg];
  const int dst_len = g.seg_lengths[dst_seg];
  moves.reserve(static_cast<std::size_t>(src_len) * (dst_len + 1));
  for (int sp = 0; sp < src_len; ++sp)
    for (int ip = 0; ip <= dst_len; ++ip) moves.push_back({src_seg, dst_seg, sp, ip});
  return moves;
}

/// Random genome: shuffled permutation plus a uniform random composition of
/// S into T+1 nonnegative parts.
inline Genome random_genome(Rng& rng, int station_count, int truck_count) {
  Genome g;
  g.perm.resize(station_count);
  std::iota(g.perm.begin(), g.perm.end(), 0);
  for (int i = station_count - 1; i > 0; --i)
    std::swap(g.perm[i], g.perm[rng.index(static_cast<std::size_t>(i) + 1)]);

  // Stars and bars: pick T distinct dividers among S + T slots.
  const int parts = truck_count + 1;
  const int slots = station_count + parts - 1;
  std::vector<int> dividers;
  while (static_cast<int>(dividers.size()) < parts - 1) {
    const int d = static_cast<int>(rng.index(slots));
    if (std::find(dividers.begin(), dividers.end(), d) == dividers.end()) dividers.push_back(d);
  }
  std::sort(dividers.begin(), dividers.end());
  g.seg_lengths.resize(parts);
  int prev = -1;
  for (int k = 0; k < parts - 1; ++k) {
    g.seg_lengths[k] = dividers[k] - prev - 1;
    prev = dividers[k];
  }
  g.seg_lengths[parts - 1] = slots - prev - 1;
  return g;
}

inline nlohmann::json genome_to_json(const Genome& g) {
  return nlohmann::json{{"perm", g.perm}, {"segments", g.seg_lengths}};
}

inline Genome genome_from_json(const nlohmann::json& j) {
  Genome g;
  try {
    g.perm = j.at("perm").get<std::vector<int>>();
    g.seg_lengths = j.at("segments").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("genome parse failure: ") + e.what());
  }
  validate_genome(g);
  return g;
}

}  // namespace bikeshare
