#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/rng.hpp"

namespace bikeshare {

enum class CrossoverKind { OX, PMX, ERX, EERX };
enum class PermMutationKind { IM, BMM, BSM, SM };
enum class DomainMutationKind { AB2, BB1_MIN, BB1_MAX, BB2_MIN, BB2_MAX };

inline CrossoverKind parse_crossover(const std::string& name) {
  if (name == "OX") return CrossoverKind::OX;
  if (name == "PMX") return CrossoverKind::PMX;
  if (name == "ERX") return CrossoverKind::ERX;
  if (name == "EERX") return CrossoverKind::EERX;
  throw Error("unknown crossover operator: " + name);
}

inline PermMutationKind parse_perm_mutation(const std::string& name) {
  if (name == "IM") return PermMutationKind::IM;
  if (name == "BMM") return PermMutationKind::BMM;
  if (name == "BSM") return PermMutationKind::BSM;
  if (name == "SM") return PermMutationKind::SM;
  throw Error("unknown permutation mutation operator: " + name);
}

inline DomainMutationKind parse_domain_mutation(const std::string& name) {
  if (name == "AB2") return DomainMutationKind::AB2;
  if (name == "BB1-MIN") return DomainMutationKind::BB1_MIN;
  if (name == "BB1-MAX") return DomainMutationKind::BB1_MAX;
  if (name == "BB2-MIN") return DomainMutationKind::BB2_MIN;
  if (name == "BB2-MAX") return DomainMutationKind::BB2_MAX;
  throw Error("unknown domain mutation operator: " + name);
}

inline std::string to_string(CrossoverKind k) {
  switch (k) {
    case CrossoverKind::OX: return "OX";
    case CrossoverKind::PMX: return "PMX";
    case CrossoverKind::ERX: return "ERX";
    case CrossoverKind::EERX: return "EERX";
  }
  return "?";
}

inline std::string to_string(PermMutationKind k) {
  switch (k) {
    case PermMutationKind::IM: return "IM";
    case PermMutationKind::BMM: return "BMM";
    case PermMutationKind::BSM: return "BSM";
    case PermMutationKind::SM: return "SM";
  }
  return "?";
}

inline std::string to_string(DomainMutationKind k) {
  switch (k) {
    case DomainMutationKind::AB2: return "AB2";
    case DomainMutationKind::BB1_MIN: return "BB1-MIN";
    case DomainMutationKind::BB1_MAX: return "BB1-MAX";
    case DomainMutationKind::BB2_MIN: return "BB2-MIN";
    case DomainMutationKind::BB2_MAX: return "BB2-MAX";
  }
  return "?";
}

struct OperatorConfig {
  CrossoverKind crossover = CrossoverKind::PMX;
  PermMutationKind perm_mutation = PermMutationKind::SM;
  DomainMutationKind domain_mutation = DomainMutationKind::AB2;
  double crossover_prob = 0.1;      // PC_R
  double perm_mutation_prob = 0.25;  // PM_R
  double domain_mutation_prob = 0.15;  // PM_T
  double epsilon = 1.0;             // roulette smoothing for BB2
  int block_length = 0;             // 0: draw uniformly from [1, ceil(S/10)]
  bool include_unvisited_segment = true;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(crossover_prob) || !prob(perm_mutation_prob) || !prob(domain_mutation_prob))
      throw Error("operator probabilities must lie in [0, 1]");
    if (epsilon <= 0.0) throw Error("epsilon must be > 0");
    if (block_length < 0) throw Error("block length must be >= 1 (or 0 for per-draw)");
  }
};

/// Tuned configuration per domain mutation operator.
inline OperatorConfig operator_preset(DomainMutationKind op) {
  OperatorConfig cfg;
  cfg.domain_mutation = op;
  cfg.crossover = CrossoverKind::PMX;
  cfg.crossover_prob = 0.1;
  switch (op) {
    case DomainMutationKind::AB2:
      cfg.perm_mutation = PermMutationKind::SM;
      cfg.perm_mutation_prob = 0.25;
      cfg.domain_mutation_prob = 0.15;
      break;
    case DomainMutationKind::BB1_MIN:
      cfg.perm_mutation = PermMutationKind::SM;
      cfg.perm_mutation_prob = 0.25;
      cfg.domain_mutation_prob = 0.20;
      break;
    case DomainMutationKind::BB1_MAX:
      cfg.perm_mutation = PermMutationKind::BSM;
      cfg.perm_mutation_prob = 0.01;
      cfg.domain_mutation_prob = 0.25;
      break;
    case DomainMutationKind::BB2_MAX:
      cfg.perm_mutation = PermMutationKind::SM;
      cfg.perm_mutation_prob = 0.20;
      cfg.domain_mutation_prob = 0.25;
      break;
    case DomainMutationKind::BB2_MIN:
      cfg.perm_mutation = PermMutationKind::SM;
      cfg.perm_mutation_prob = 0.20;
      cfg.domain_mutation_prob = 0.15;
      break;
  }
  return cfg;
}

namespace detail {

/// Order crossover child: keep a's slice [c1, c2), fill the rest cyclically
/// from c2 with b's genes in order, skipping ones already present.
inline std::vector<int> ox_child(const std::vector<int>& a, const std::vector<int>& b,
                                 std::size_t c1, std::size_t c2) {
  const std::size_t n = a.size();
  std::vector<int> child(n, -1);
  std::vector<bool> taken(n, false);
  for (std::size_t p = c1; p < c2; ++p) {
    child[p] = a[p];
    taken[a[p]] = true;
  }
  std::size_t write = c2 % n;
  for (std::size_t k = 0; k < n; ++k) {
    const int v = b[(c2 + k) % n];
    if (taken[v]) continue;
    child[write] = v;
    write = (write + 1) % n;
  }
  return child;
}

/// PMX child: keep a's slice [c1, c2); positions outside take b's gene,
/// resolved through the segment mapping until it leaves the slice.
inline std::vector<int> pmx_child(const std::vector<int>& a, const std::vector<int>& b,
                                  std::size_t c1, std::size_t c2) {
  const std::size_t n = a.size();
  std::vector<int> child(n, -1);
  std::vector<int> pos_in_a(n, -1);
  std::vector<bool> in_segment(n, false);
  for (std::size_t p = 0; p < n; ++p) pos_in_a[a[p]] = static_cast<int>(p);
  for (std::size_t p = c1; p < c2; ++p) {
    child[p] = a[p];
    in_segment[a[p]] = true;
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (p >= c1 && p < c2) continue;
    int v = b[p];
    while (in_segment[v]) v = b[pos_in_a[v]];
    child[p] = v;
  }
  return child;
}

/// Edge recombination child starting from primary[0]. Adjacency is the
/// linear (non-cyclic) neighbor relation from both parents; the enhanced
/// variant prefers edges shared by both parents.
inline std::vector<int> erx_child(const std::vector<int>& primary,
                                  const std::vector<int>& secondary, Rng& rng,
                                  bool enhanced) {
  const std::size_t n = primary.size();
  std::vector<std::vector<int>> adj(n);
  std::vector<std::vector<bool>> shared(n);
  auto add_edge = [&](int u, int v, bool from_secondary) {
    auto it = std::find(adj[u].begin(), adj[u].end(), v);
    if (it == adj[u].end()) {
      adj[u].push_back(v);
      shared[u].push_back(false);
    } else if (from_secondary) {
      shared[u][static_cast<std::size_t>(it - adj[u].begin())] = true;
    }
  };
  for (std::size_t p = 0; p + 1 < n; ++p) {
    add_edge(primary[p], primary[p + 1], false);
    add_edge(primary[p + 1], primary[p], false);
  }
  for (std::size_t p = 0; p + 1 < n; ++p) {
    add_edge(secondary[p], secondary[p + 1], true);
    add_edge(secondary[p + 1], secondary[p], true);
  }

  std::vector<bool> visited(n, false);
  std::vector<int> child;
  child.reserve(n);
  int current = primary[0];
  while (true) {
    child.push_back(current);
    visited[current] = true;
    if (child.size() == n) break;

    std::vector<int> candidates;
    bool any_shared = false;
    for (std::size_t k = 0; k < adj[current].size(); ++k)
      if (!visited[adj[current][k]] && shared[current][k]) any_shared = true;
    for (std::size_t k = 0; k < adj[current].size(); ++k) {
      const int v = adj[current][k];
      if (visited[v]) continue;
      if (enhanced && any_shared && !shared[current][k]) continue;
      candidates.push_back(v);
    }

    if (candidates.empty()) {
      std::vector<int> unvisited;
      for (std::size_t v = 0; v < n; ++v)
        if (!visited[v]) unvisited.push_back(static_cast<int>(v));
      current = unvisited[rng.index(unvisited.size())];
      continue;
    }

    auto live_degree = [&](int v) {
      int deg = 0;
      for (int w : adj[v])
        if (!visited[w]) ++deg;
      return deg;
    };
    int best_deg = live_degree(candidates[0]);
    std::vector<int> tied{candidates[0]};
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      const int deg = live_degree(candidates[k]);
      if (deg < best_deg) {
        best_deg = deg;
        tied = {candidates[k]};
      } else if (deg == best_deg) {
        tied.push_back(candidates[k]);
      }
    }
    current = tied.size() == 1 ? tied[0] : tied[rng.index(tied.size())];
  }
  return child;
}

}  // namespace detail

/// Recombines two parent permutations into two children. Children are always
/// permutations of the same station set.
inline std::pair<std::vector<int>, std::vector<int>> crossover(CrossoverKind kind,
                                                               const std::vector<int>& a,
                                                               const std::vector<int>& b,
                                                               Rng& rng) {
  if (a.size() != b.size()) throw Error("crossover: parent length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return {a, b};
  switch (kind) {
    case CrossoverKind::OX:
    case CrossoverKind::PMX: {
      std::size_t c1 = rng.index(n);
      std::size_t c2 = rng.index(n);
      if (c1 > c2) std::swap(c1, c2);
      if (kind == CrossoverKind::OX)
        return {detail::ox_child(a, b, c1, c2), detail::ox_child(b, a, c1, c2)};
      return {detail::pmx_child(a, b, c1, c2), detail::pmx_child(b, a, c1, c2)};
    }
    case CrossoverKind::ERX:
      return {detail::erx_child(a, b, rng, false), detail::erx_child(b, a, rng, false)};
    case CrossoverKind::EERX:
      return {detail::erx_child(a, b, rng, true), detail::erx_child(b, a, rng, true)};
  }
  throw Error("unreachable crossover kind");
}

namespace detail {

inline void inversion(std::vector<int>& perm, int i, int j) {
  if (i > j) std::swap(i, j);
  std::reverse(perm.begin() + i, perm.begin() + j + 1);
}

inline void swap_positions(std::vector<int>& perm, int i, int j) {
  std::swap(perm[i], perm[j]);
}

/// Relocates the block [src, src+len) so it starts at dst of the reduced
/// sequence.
inline void block_move(std::vector<int>& perm, int src, int len, int dst) {
  std::vector<int> taken(perm.begin() + src, perm.begin() + src + len);
  perm.erase(perm.begin() + src, perm.begin() + src + len);
  perm.insert(perm.begin() + dst, taken.begin(), taken.end());
}

/// Exchanges the non-overlapping blocks starting at s1 and s2 (length len).
inline void block_swap(std::vector<int>& perm, int s1, int s2, int len) {
  std::swap_ranges(perm.begin() + s1, perm.begin() + s1 + len, perm.begin() + s2);
}

}  // namespace detail

/// Mutates a permutation in place. block_length 0 draws the block size
/// uniformly from [1, ceil(S/10)]. Degenerate draws are silent no-ops.
inline void mutate_perm(PermMutationKind kind, std::vector<int>& perm, Rng& rng,
                        int block_length = 0) {
  const int n = static_cast<int>(perm.size());
  if (n < 2) return;
  auto block = [&] {
    if (block_length >= 1) return std::min(block_length, n);
    return rng.uniform_int(1, std::max(1, (n + 9) / 10));
  };
  switch (kind) {
    case PermMutationKind::IM:
      detail::inversion(perm, static_cast<int>(rng.index(n)), static_cast<int>(rng.index(n)));
      break;
    case PermMutationKind::SM:
      detail::swap_positions(perm, static_cast<int>(rng.index(n)),
                             static_cast<int>(rng.index(n)));
      break;
    case PermMutationKind::BMM: {
      const int len = block();
      if (len >= n) break;
      detail::block_move(perm, rng.uniform_int(0, n - len), len, rng.uniform_int(0, n - len));
      break;
    }
    case PermMutationKind::BSM: {
      const int len = block();
      if (2 * len > n) break;
      const int s1 = rng.uniform_int(0, n - len);
      std::vector<int> valid;
      for (int s2 = 0; s2 <= n - len; ++s2)
        if (s2 + len <= s1 || s1 + len <= s2) valid.push_back(s2);
      if (valid.empty()) break;
      detail::block_swap(perm, s1, valid[rng.index(valid.size())], len);
      break;
    }
  }
}

/// Distance change induced by one relocation: only the two touched segments
/// contribute, and the unvisited segment has zero route length.
inline double relocation_delta(const Genome& g, const RelocateMove& m, const Instance& inst) {
  const std::vector<int> off = segment_offsets(g);
  const int unvisited = g.unvisited_segment();
  const int station_node = Instance::node_of(g.perm[off[m.src_seg] + m.src_pos]);
  double delta = 0.0;
  if (m.src_seg != unvisited) {
    const int len = g.seg_lengths[m.src_seg];
    const int prev =
        m.src_pos > 0 ? Instance::node_of(g.perm[off[m.src_seg] + m.src_pos - 1]) : 0;
    const int next =
        m.src_pos < len - 1 ? Instance::node_of(g.perm[off[m.src_seg] + m.src_pos + 1]) : 0;
    delta += inst.dist(prev, next) - inst.dist(prev, station_node) -
             inst.dist(station_node, next);
  }
  if (m.dst_seg != unvisited) {
    const int len = g.seg_lengths[m.dst_seg];
    const int prev =
        m.ins_pos > 0 ? Instance::node_of(g.perm[off[m.dst_seg] + m.ins_pos - 1]) : 0;
    const int next = m.ins_pos < len ? Instance::node_of(g.perm[off[m.dst_seg] + m.ins_pos]) : 0;
    delta += inst.dist(prev, station_node) + inst.dist(station_node, next) -
             inst.dist(prev, next);
  }
  return delta;
}

enum class DeltaSense { Min, Max };

namespace detail {

/// Picks (source, destination): source uniform over nonempty eligible
/// segments, destination uniform over the remaining eligible ones. Returns
/// nothing when no move exists.
inline std::optional<std::pair<int, int>> pick_segment_pair(const Genome& g,
                                                            bool include_unvisited,
                                                            Rng& rng) {
  const int eligible = g.truck_count() + (include_unvisited ? 1 : 0);
  if (eligible < 2) return std::nullopt;
  std::vector<int> nonempty;
  for (int k = 0; k < eligible; ++k)
    if (g.seg_lengths[k] > 0) nonempty.push_back(k);
  if (nonempty.empty()) return std::nullopt;
  const int src = nonempty[rng.index(nonempty.size())];
  int dst = static_cast<int>(rng.index(static_cast<std::size_t>(eligible) - 1));
  if (dst >= src) ++dst;
  return std::make_pair(src, dst);
}

/// Roulette weights over distance deltas: 1/(eps + c_m) where c_m shifts the
/// deltas to be nonnegative at the favored extreme.
inline std::vector<double> bb2_weights(const std::vector<double>& deltas, DeltaSense sense,
                                       double epsilon) {
  const auto [lo, hi] = std::minmax_element(deltas.begin(), deltas.end());
  std::vector<double> weights(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const double shifted = sense == DeltaSense::Min ? deltas[k] - *lo : *hi - deltas[k];
    weights[k] = 1.0 / (epsilon + shifted);
  }
  return weights;
}

inline std::size_t bb2_pick(const std::vector<double>& deltas, DeltaSense sense,
                            double epsilon, Rng& rng) {
  const std::vector<double> weights = bb2_weights(deltas, sense, epsilon);
  double total = 0.0;
  for (double w : weights) total += w;
  double r = rng.uniform01() * total;
  std::size_t pick = weights.size() - 1;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    r -= weights[k];
    if (r <= 0.0) {
      pick = k;
      break;
    }
  }
  return pick;
}

}  // namespace detail

/// Unbiased 1-0 relocate between two segments.
inline Genome mutate_ab2(Genome g, Rng& rng, const OperatorConfig& cfg) {
  const auto pair = detail::pick_segment_pair(g, cfg.include_unvisited_segment, rng);
  if (!pair) return g;
  const auto [src, dst] = *pair;
  RelocateMove m;
  m.src_seg = src;
  m.dst_seg = dst;
  m.src_pos = static_cast<int>(rng.index(g.seg_lengths[src]));
  m.ins_pos = static_cast<int>(rng.index(static_cast<std::size_t>(g.seg_lengths[dst]) + 1));
  apply_relocate_inplace(g, m);
  return g;
}

/// Best-improvement relocation: scans the full 1-0 neighborhood of a random
/// segment pair and applies the extreme move (first occurrence breaks ties).
inline Genome mutate_bb1(Genome g, Rng& rng, const OperatorConfig& cfg, DeltaSense sense,
                         const Instance& inst) {
  const auto pair = detail::pick_segment_pair(g, cfg.include_unvisited_segment, rng);
  if (!pair) return g;
  const std::vector<RelocateMove> moves = enumerate_relocations(g, pair->first, pair->second);
  if (moves.empty()) return g;
  std::size_t best = 0;
  double best_delta = relocation_delta(g, moves[0], inst);
  for (std::size_t k = 1; k < moves.size(); ++k) {
    const double d = relocation_delta(g, moves[k], inst);
    const bool better = sense == DeltaSense::Min ? d < best_delta : d > best_delta;
    if (better) {
      best = k;
      best_delta = d;
    }
  }
  apply_relocate_inplace(g, moves[best]);
  return g;
}

/// Roulette-biased relocation: weights 1/(eps + c_m) where c_m shifts the
/// distance deltas to be nonnegative at the favored extreme.
inline Genome mutate_bb2(Genome g, Rng& rng, const OperatorConfig& cfg, DeltaSense sense,
                         const Instance& inst) {
  const auto pair = detail::pick_segment_pair(g, cfg.include_unvisited_segment, rng);
  if (!pair) return g;
  const std::vector<RelocateMove> moves = enumerate_relocations(g, pair->first, pair->second);
  if (moves.empty()) return g;
  std::vector<double> deltas(moves.size());
  for (std::size_t k = 0; k < moves.size(); ++k)
    deltas[k] = relocation_delta(g, moves[k], inst);
  apply_relocate_inplace(g, moves[detail::bb2_pick(deltas, sense, cfg.epsilon, rng)]);
  return g;
}

inline Genome mutate_domain(DomainMutationKind kind, Genome g, Rng& rng,
                            const OperatorConfig& cfg, const Instance& inst) {
  switch (kind) {
    case DomainMutationKind::AB2: return mutate_ab2(std::move(g), rng, cfg);
    case DomainMutationKind::BB1_MIN:
      return mutate_bb1(std::move(g), rng, cfg, DeltaSense::Min, inst);
    case DomainMutationKind::BB1_MAX:
      return mutate_bb1(std::move(g), rng, cfg, DeltaSense::Max, inst);
    case DomainMutationKind::BB2_MIN:
      return mutate_bb2(std::move(g), rng, cfg, DeltaSense::Min, inst);
    case DomainMutationKind::BB2_MAX:
      return mutate_bb2(std::move(g), rng, cfg, DeltaSense::Max, inst);
  }
  throw Error("unreachable domain mutation kind");
}

}  // namespace bikeshare
