#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bikeshare/common.hpp"
#include "bikeshare/rng.hpp"

namespace bikeshare {

struct Station {
  int id = 0;             // dense index in [0, S)
  int dock_capacity = 0;  // L_i
  int initial_stock = 0;  // O_i, 0 <= O_i <= L_i
};

/// Static problem data. Distance matrix is (S+1) x (S+1) with node 0 the
/// depot and node i+1 the station with id i. The matrix may be asymmetric.
struct Instance {
  std::vector<Station> stations;
  int truck_count = 1;
  int truck_capacity = 1;
  std::vector<std::vector<double>> distances;

  int station_count() const { return static_cast<int>(stations.size()); }

  static int node_of(int station_id) { return station_id + 1; }

  double dist(int node_u, int node_v) const { return distances[node_u][node_v]; }

  double station_dist(int i, int j) const { return distances[node_of(i)][node_of(j)]; }

  void validate() const {
    if (stations.empty()) throw Error("instance has no stations");
    if (truck_count < 1) throw Error("truck_count must be >= 1");
    if (truck_capacity < 1) throw Error("truck_capacity must be >= 1");
    const std::size_t n = stations.size() + 1;
    if (distances.size() != n)
      throw Error("distance matrix has " + std::to_string(distances.size()) +
                  " rows, expected " + std::to_string(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (distances[r].size() != n)
        throw Error("distance matrix row " + std::to_string(r) + " has " +
                    std::to_string(distances[r].size()) + " columns, expected " +
                    std::to_string(n));
      for (std::size_t c = 0; c < n; ++c) {
        const double d = distances[r][c];
        if (!std::isfinite(d) || d < 0.0)
          throw Error("distance[" + std::to_string(r) + "][" + std::to_string(c) +
                      "] must be finite and >= 0");
      }
      if (distances[r][r] != 0.0)
        throw Error("distance[" + std::to_string(r) + "][" + std::to_string(r) +
                    "] must be 0");
    }
    for (const Station& s : stations) {
      if (s.dock_capacity < 0)
        throw Error("station " + std::to_string(s.id) + ": dock capacity < 0");
      if (s.initial_stock < 0 || s.initial_stock > s.dock_capacity)
        throw Error("station " + std::to_string(s.id) +
                    ": initial stock must lie in [0, capacity]");
    }
  }
};

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json st = nlohmann::json::array();
  for (const Station& s : inst.stations)
    st.push_back({{"capacity", s.dock_capacity}, {"initial", s.initial_stock}});
  return nlohmann::json{{"truck_count", inst.truck_count},
                        {"truck_capacity", inst.truck_capacity},
                        {"stations", std::move(st)},
                        {"distances", inst.distances}};
}

inline Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  try {
    inst.truck_count = j.at("truck_count").get<int>();
    inst.truck_capacity = j.at("truck_capacity").get<int>();
    int id = 0;
    for (const auto& s : j.at("stations")) {
      Station st;
      st.id = id++;
      st.dock_capacity = s.at("capacity").get<int>();
      st.initial_stock = s.at("initial").get<int>();
      inst.stations.push_back(st);
    }
    inst.distances = j.at("distances").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("instance parse failure: ") + e.what());
  }
  inst.validate();
  return inst;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("instance parse failure in " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

/// Weighted directed graph standing in for a street network. Stations map to
/// graph nodes; the distance matrix comes from all-pairs shortest paths.
struct EdgeListGraph {
  int nodes = 0;
  int depot = 0;
  std::vector<int> station_nodes;
  std::vector<std::tuple<int, int, double>> edges;  // (u, v, w >= 0)
};

inline EdgeListGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    EdgeListGraph g;
    g.nodes = j.at("nodes").get<int>();
    g.depot = j.at("depot").get<int>();
    g.station_nodes = j.at("station_nodes").get<std::vector<int>>();
    for (const auto& e : j.at("edges"))
      g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error("graph parse failure in " + path + ": " + e.what());
  }
}

namespace detail {

inline std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                                    int source) {
  std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        pq.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

}  // namespace detail

/// All-pairs shortest-path distances among depot + mapped stations.
/// Row/column 0 is the depot, row/column i+1 is station_nodes[i].
inline std::vector<std::vector<double>> distances_from_graph(const EdgeListGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.nodes);
  for (const auto& [u, v, w] : g.edges) {
    if (u < 0 || u >= g.nodes || v < 0 || v >= g.nodes)
      throw Error("graph edge references node outside [0, nodes)");
    if (w < 0.0) throw Error("graph edge weight must be >= 0");
    adj[u].emplace_back(v, w);
  }
  std::vector<int> mapped;
  mapped.push_back(g.depot);
  mapped.insert(mapped.end(), g.station_nodes.begin(), g.station_nodes.end());
  const std::size_t n = mapped.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<double> d = detail::dijkstra(adj, mapped[r]);
    for (std::size_t c = 0; c < n; ++c) {
      if (!std::isfinite(d[mapped[c]]))
        throw Error("no path from node " + std::to_string(mapped[r]) + " to node " +
                    std::to_string(mapped[c]));
      out[r][c] = d[mapped[c]];
    }
  }
  return out;
}

struct GeneratorParams {
  double square_size = 10.0;  // stations placed uniformly in this square
  int cap_min = 10;
  int cap_max = 30;
};

/// Synthetic instance: uniform station placement, depot at the square center,
/// Euclidean distances, stock drawn uniformly within capacity.
inline Instance generate_instance(std::uint64_t seed, int station_count, int truck_count,
                                  int truck_capacity, const GeneratorParams& params = {}) {
  if (station_count < 1) throw Error("station_count must be >= 1");
  if (truck_count < 1) throw Error("truck_count must be >= 1");
  if (truck_capacity < 1) throw Error("truck_capacity must be >= 1");
  if (params.square_size <= 0.0) throw Error("square_size must be > 0");
  if (params.cap_min < 1 || params.cap_max < params.cap_min)
    throw Error("capacity range must satisfy 1 <= cap_min <= cap_max");

  Rng rng(seed);
  Instance inst;
  inst.truck_count = truck_count;
  inst.truck_capacity = truck_capacity;

  std::vector<std::pair<double, double>> pos;
  pos.emplace_back(params.square_size / 2.0, params.square_size / 2.0);  // depot
  for (int i = 0; i < station_count; ++i) {
    pos.emplace_back(rng.uniform01() * params.square_size,
                     rng.uniform01() * params.square_size);
    Station s;
    s.id = i;
    s.dock_capacity = rng.uniform_int(params.cap_min, params.cap_max);
    s.initial_stock = rng.uniform_int(0, s.dock_capacity);
    inst.stations.push_back(s);
  }
  const std::size_t n = pos.size();
  inst.distances.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      inst.distances[a][b] = std::hypot(pos[a].first - pos[b].first,
                                        pos[a].second - pos[b].second);
  inst.validate();
  return inst;
}

}  // namespace bikeshare
