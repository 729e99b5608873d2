#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bikeshare/baselines.hpp"
#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/evaluator.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/metrics.hpp"
#include "bikeshare/nsga2.hpp"
#include "bikeshare/scenarios.hpp"

namespace bikeshare {

// ---------------------------------------------------------------------------
// Front CSV: run_id, solution_id, f1, f2, f3, trucks_used, genome_json
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t p = 0; p < line.size(); ++p) {
    const char c = line[p];
    if (quoted) {
      if (c == '"' && p + 1 < line.size() && line[p + 1] == '"') {
        field += '"';
        ++p;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace detail

struct FrontRow {
  std::string run_id;
  int solution_id = 0;
  Objectives objectives;
  int trucks_used = 0;
  Genome genome;
};

inline void write_front_csv(const std::string& path, const std::vector<FrontRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write front CSV: " + path);
  out << "run_id,solution_id,f1,f2,f3,trucks_used,genome_json\n";
  for (const FrontRow& r : rows) {
    out << r.run_id << ',' << r.solution_id << ',' << detail::format_double(r.objectives.f1)
        << ',' << detail::format_double(r.objectives.f2) << ','
        << detail::format_double(r.objectives.f3) << ',' << r.trucks_used << ','
        << detail::csv_quote(genome_to_json(r.genome).dump()) << '\n';
  }
}

inline std::vector<FrontRow> read_front_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open front CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty front CSV: " + path);
  std::vector<FrontRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::csv_split(line);
    if (f.size() != 7) throw Error("malformed front CSV row in " + path);
    FrontRow r;
    r.run_id = f[0];
    r.solution_id = std::stoi(f[1]);
    r.objectives = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
    r.trucks_used = std::stoi(f[5]);
    r.genome = genome_from_json(nlohmann::json::parse(f[6]));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<FrontRow> archive_to_rows(const FrontArchive& archive,
                                             const std::string& run_id) {
  std::vector<FrontRow> rows;
  rows.reserve(archive.size());
  int id = 0;
  for (const FrontEntry& e : archive.entries()) {
    FrontRow r;
    r.run_id = run_id;
    r.solution_id = id++;
    r.objectives = e.objectives;
    r.genome = e.genome;
    r.trucks_used = decode(e.genome).trucks_used();
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_stats_csv(const std::string& path, const std::vector<GenerationStats>& stats) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write stats CSV: " + path);
  out << "generation,best_f1,best_f2,best_f3,archive_size,archive_hypervolume\n";
  for (const GenerationStats& g : stats)
    out << g.generation << ',' << detail::format_double(g.best_f1) << ','
        << detail::format_double(g.best_f2) << ',' << detail::format_double(g.best_f3) << ','
        << g.archive_size << ',' << detail::format_double(g.archive_hypervolume) << '\n';
}

// ---------------------------------------------------------------------------
// Metrics report
// ---------------------------------------------------------------------------

namespace detail {

inline std::string front_hash(const std::vector<Point3>& pts) {
  // FNV-1a over the canonical text form of the objective vectors.
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const Point3& p : pts)
    for (double v : p) mix(format_double(v) + ";");
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

inline nlohmann::json metrics_report(const std::string& run_id,
                                     const std::vector<Point3>& front,
                                     const std::vector<Point3>& reference) {
  const Point3 ref_point = shared_reference_point(front, reference);
  return nlohmann::json{
      {"run_id", run_id},
      {"rhv", relative_hypervolume(front, reference)},
      {"gd_plus", gd_plus(to_pointn(front), to_pointn(reference))},
      {"igd_plus", igd_plus(to_pointn(front), to_pointn(reference))},
      {"spread", spread(to_pointn(front))},
      {"nds", front.size()},
      {"reference_point", ref_point},
      {"reference_front_hash", detail::front_hash(reference)}};
}

// ---------------------------------------------------------------------------
// Problem-centric reports
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json summary_stats(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double idx = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (idx - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return nlohmann::json{{"min", v.front()},
                        {"median", quantile(0.5)},
                        {"iqr", quantile(0.75) - quantile(0.25)},
                        {"max", v.back()},
                        {"count", v.size()}};
}

}  // namespace detail

/// Groups archive solutions by the number of nonempty routes and summarizes
/// f1 and f2 per group. Group 0 is the no-rebalancing configuration.
inline nlohmann::json report_by_truck_count(const FrontArchive& archive) {
  if (archive.empty()) throw Error("report_by_truck_count: empty archive");
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const FrontEntry& e : archive.entries()) {
    const int trucks = decode(e.genome).trucks_used();
    groups[trucks].first.push_back(e.objectives.f1);
    groups[trucks].second.push_back(e.objectives.f2);
  }
  nlohmann::json out = nlohmann::json::array();
  for (auto& [trucks, values] : groups)
    out.push_back({{"trucks", trucks},
                   {"f1", detail::summary_stats(values.first)},
                   {"f2", detail::summary_stats(values.second)}});
  return out;
}

/// Per-station shortfall histogram for one scenario, alongside the
/// no-rebalancing baseline from the empty plan.
inline nlohmann::json report_station_shortfall(const RoutePlan& plan, const Instance& inst,
                                               const ScenarioSet& set, int scenario) {
  auto histogram = [&](const RoutePlan& p) {
    const ScenarioResult res = simulate_scenario(p, inst, set, scenario);
    std::map<int, int> buckets;
    for (int u : res.unmet) ++buckets[u];
    nlohmann::json h = nlohmann::json::object();
    for (const auto& [u, n] : buckets) h[std::to_string(u)] = n;
    return h;
  };
  RoutePlan empty;
  empty.routes.assign(inst.truck_count, {});
  for (int i = 0; i < inst.station_count(); ++i) empty.unvisited.push_back(i);
  return nlohmann::json{{"scenario", scenario},
                        {"plan", histogram(plan)},
                        {"no_rebalancing", histogram(empty)}};
}

// ---------------------------------------------------------------------------
// Experiment configuration and campaign runner
// ---------------------------------------------------------------------------

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error("unknown key '" + path + "." + key + "' in experiment config");
  }
}

}  // namespace detail

struct SolverSpec {
  std::string id;
  std::string kind;  // "nsga2" | "rrcp-bi" | "globe"
  // nsga2
  DomainMutationKind domain_op = DomainMutationKind::BB1_MAX;
  int mu = 200;
  int generations = 500;
  OperatorConfig operators;  // resolved from the operator preset + overrides
  // baselines
  std::string preset = "SD";
  RrcpConfig rrcp;
  GlobeConfig globe_cfg;
};

struct Experiment {
  // instance source
  std::string instance_file;  // empty: generate
  std::uint64_t gen_seed = 0;
  int gen_stations = 0, gen_trucks = 0, gen_capacity = 0;
  GeneratorParams gen_params;
  // scenario source
  std::string scenario_file;  // empty: sample
  std::uint64_t scen_seed = 0;
  int scen_count = 0;
  DemandModel demand_model;
  // optional split
  bool split = false;
  std::uint64_t split_seed = 0;
  double split_ratio = 0.8;

  std::vector<SolverSpec> solvers;
  int repetitions = 1;
  std::uint64_t base_seed = 0;
  std::string output_dir;
  unsigned workers = 1;
};

inline Experiment parse_experiment(const nlohmann::json& j) {
  Experiment exp;
  detail::require_keys(j, {"instance", "scenarios", "split", "solvers", "repetitions",
                           "base_seed", "output_dir"},
                       "");
  const auto& inst = j.at("instance");
  detail::require_keys(inst, {"file", "generate"}, "instance");
  if (inst.contains("file")) {
    exp.instance_file = inst.at("file").get<std::string>();
  } else {
    const auto& gen = inst.at("generate");
    detail::require_keys(gen, {"seed", "stations", "trucks", "capacity", "square_size",
                               "cap_min", "cap_max"},
                         "instance.generate");
    exp.gen_seed = gen.at("seed").get<std::uint64_t>();
    exp.gen_stations = gen.at("stations").get<int>();
    exp.gen_trucks = gen.at("trucks").get<int>();
    exp.gen_capacity = gen.at("capacity").get<int>();
    if (gen.contains("square_size")) exp.gen_params.square_size = gen.at("square_size");
    if (gen.contains("cap_min")) exp.gen_params.cap_min = gen.at("cap_min");
    if (gen.contains("cap_max")) exp.gen_params.cap_max = gen.at("cap_max");
  }
  const auto& scen = j.at("scenarios");
  detail::require_keys(scen, {"file", "sample"}, "scenarios");
  if (scen.contains("file")) {
    exp.scenario_file = scen.at("file").get<std::string>();
  } else {
    const auto& s = scen.at("sample");
    detail::require_keys(s, {"seed", "count", "mean_span", "sigma"}, "scenarios.sample");
    exp.scen_seed = s.at("seed").get<std::uint64_t>();
    exp.scen_count = s.at("count").get<int>();
    if (s.contains("mean_span")) exp.demand_model.mean_span = s.at("mean_span");
    if (s.contains("sigma")) exp.demand_model.sigma = s.at("sigma");
  }
  if (j.contains("split")) {
    const auto& sp = j.at("split");
    detail::require_keys(sp, {"seed", "ratio"}, "split");
    exp.split = true;
    exp.split_seed = sp.at("seed").get<std::uint64_t>();
    if (sp.contains("ratio")) exp.split_ratio = sp.at("ratio");
  }
  for (const auto& s : j.at("solvers")) {
    detail::require_keys(s,
                         {"id", "type", "operator", "mu", "generations", "crossover",
                          "perm_mutation", "pc", "pm_r", "pm_t", "epsilon",
                          "include_unvisited_segment", "preset", "m_max", "beta_pick",
                          "beta_drop", "lambda", "d1", "d2", "gamma", "score_mode"},
                         "solvers[]");
    SolverSpec spec;
    spec.id = s.at("id").get<std::string>();
    spec.kind = s.at("type").get<std::string>();
    if (spec.kind == "nsga2") {
      spec.domain_op = parse_domain_mutation(s.value("operator", std::string("BB1-MAX")));
      spec.operators = operator_preset(spec.domain_op);
      if (s.contains("mu")) spec.mu = s.at("mu");
      if (s.contains("generations")) spec.generations = s.at("generations");
      if (s.contains("crossover"))
        spec.operators.crossover = parse_crossover(s.at("crossover").get<std::string>());
      if (s.contains("perm_mutation"))
        spec.operators.perm_mutation =
            parse_perm_mutation(s.at("perm_mutation").get<std::string>());
      if (s.contains("pc")) spec.operators.crossover_prob = s.at("pc");
      if (s.contains("pm_r")) spec.operators.perm_mutation_prob = s.at("pm_r");
      if (s.contains("pm_t")) spec.operators.domain_mutation_prob = s.at("pm_t");
      if (s.contains("epsilon")) spec.operators.epsilon = s.at("epsilon");
      if (s.contains("include_unvisited_segment"))
        spec.operators.include_unvisited_segment = s.at("include_unvisited_segment");
    } else if (spec.kind == "rrcp-bi") {
      spec.preset = s.value("preset", std::string("SD"));
      spec.rrcp = rrcp_preset(spec.preset);
      if (s.contains("m_max")) spec.rrcp.m_max = s.at("m_max");
      if (s.contains("beta_pick")) spec.rrcp.beta_pick = s.at("beta_pick");
      if (s.contains("beta_drop")) spec.rrcp.beta_drop = s.at("beta_drop");
      if (s.contains("lambda")) spec.rrcp.lambda = s.at("lambda");
      if (s.contains("epsilon")) spec.rrcp.epsilon = s.at("epsilon");
      if (s.contains("score_mode"))
        spec.rrcp.score_mode = parse_score_mode(s.at("score_mode").get<std::string>());
    } else if (spec.kind == "globe") {
      spec.preset = s.value("preset", std::string("SD"));
      spec.globe_cfg = globe_preset(spec.preset);
      if (s.contains("d1")) spec.globe_cfg.d1 = s.at("d1");
      if (s.contains("d2")) spec.globe_cfg.d2 = s.at("d2");
      if (s.contains("gamma")) spec.globe_cfg.gamma = s.at("gamma");
      if (s.contains("epsilon")) spec.globe_cfg.epsilon = s.at("epsilon");
      if (s.contains("score_mode"))
        spec.globe_cfg.score_mode = parse_score_mode(s.at("score_mode").get<std::string>());
    } else {
      throw Error("unknown solver type '" + spec.kind + "' (expected nsga2, rrcp-bi, globe)");
    }
    exp.solvers.push_back(std::move(spec));
  }
  exp.repetitions = j.at("repetitions").get<int>();
  if (exp.repetitions < 1) throw Error("repetitions must be >= 1");
  exp.base_seed = j.at("base_seed").get<std::uint64_t>();
  exp.output_dir = j.at("output_dir").get<std::string>();
  if (exp.solvers.empty()) throw Error("experiment needs at least one solver");
  return exp;
}

/// Runs one solver repetition and returns the resulting front archive.
inline FrontArchive run_solver(const SolverSpec& spec, const Instance& inst,
                               const ScenarioSet& train, std::uint64_t seed,
                               const std::string& run_id, unsigned workers,
                               std::vector<GenerationStats>* stats = nullptr) {
  if (spec.kind == "nsga2") {
    RunConfig cfg;
    cfg.mu = spec.mu;
    cfg.generations = spec.generations;
    cfg.operators = spec.operators;
    cfg.seed = seed;
    cfg.workers = workers;
    RunResult result = run_nsga2(inst, train, cfg, run_id);
    if (stats) *stats = std::move(result.stats);
    return std::move(result.front);
  }
  RoutePlan plan;
  if (spec.kind == "rrcp-bi") {
    RrcpConfig cfg = spec.rrcp;
    cfg.seed = seed;
    plan = rrcp_bi(inst, DemandProxy::from_scenarios(inst, train), cfg);
  } else {
    GlobeConfig cfg = spec.globe_cfg;
    cfg.seed = seed;
    plan = globe(inst, DemandProxy::from_scenarios(inst, train), cfg);
  }
  FrontArchive archive;
  archive.insert({evaluate_plan(plan, inst, train), encode(plan), run_id});
  return archive;
}

/// Executes the whole campaign: every solver x repetition, pooled reference
/// front with provenance, per-run metrics against the pooled front, and an
/// optional validation-set re-evaluation. Returns the output directory.
inline std::string run_experiment(const Experiment& exp) {
  namespace fs = std::filesystem;
  Instance inst = exp.instance_file.empty()
                      ? generate_instance(exp.gen_seed, exp.gen_stations, exp.gen_trucks,
                                          exp.gen_capacity, exp.gen_params)
                      : load_instance(exp.instance_file);
  ScenarioSet pool = exp.scenario_file.empty()
                         ? sample_scenarios(exp.scen_seed, inst, exp.scen_count,
                                            exp.demand_model)
                         : load_scenarios(exp.scenario_file, inst);
  ScenarioSet train = pool;
  ScenarioSet validation;
  if (exp.split) {
    auto [tr, va] = split_train_validation(exp.split_seed, inst, pool, exp.split_ratio);
    train = std::move(tr);
    validation = std::move(va);
  }

  fs::create_directories(exp.output_dir);
  struct RunRecord {
    std::string solver_id;
    std::string run_id;
    fs::path dir;
    FrontArchive archive;
  };
  std::vector<RunRecord> runs;
  for (const SolverSpec& spec : exp.solvers) {
    for (int rep = 0; rep < exp.repetitions; ++rep) {
      RunRecord rec;
      rec.solver_id = spec.id;
      rec.run_id = spec.id + "-rep" + std::to_string(rep);
      rec.dir = fs::path(exp.output_dir) / spec.id / ("rep_" + std::to_string(rep));
      fs::create_directories(rec.dir);
      std::vector<GenerationStats> stats;
      rec.archive = run_solver(spec, inst, train, exp.base_seed + rep, spec.id, exp.workers,
                               &stats);
      write_front_csv((rec.dir / "front.csv").string(),
                      archive_to_rows(rec.archive, rec.run_id));
      if (!stats.empty()) write_stats_csv((rec.dir / "stats.csv").string(), stats);
      if (exp.split) {
        FrontArchive reval;
        for (const FrontEntry& e : rec.archive.entries())
          reval.insert({evaluate(e.genome, inst, validation), e.genome, e.provenance});
        write_front_csv((rec.dir / "front_validation.csv").string(),
                        archive_to_rows(reval, rec.run_id));
      }
      runs.push_back(std::move(rec));
    }
  }

  std::vector<FrontArchive> archives;
  archives.reserve(runs.size());
  for (const RunRecord& r : runs) archives.push_back(r.archive);
  const FrontArchive pooled = pool_reference_front(archives);
  const fs::path pooled_dir = fs::path(exp.output_dir) / "pooled";
  fs::create_directories(pooled_dir);
  {
    std::vector<FrontRow> rows;
    int id = 0;
    for (const FrontEntry& e : pooled.entries()) {
      FrontRow r;
      r.run_id = e.provenance;
      r.solution_id = id++;
      r.objectives = e.objectives;
      r.genome = e.genome;
      r.trucks_used = decode(e.genome).trucks_used();
      rows.push_back(std::move(r));
    }
    write_front_csv((pooled_dir / "reference_front.csv").string(), rows);
    nlohmann::json attribution = nlohmann::json::object();
    for (const SolverSpec& spec : exp.solvers)
      attribution[spec.id] = nds_count(pooled, spec.id);
    std::ofstream out(pooled_dir / "nds_by_method.json");
    out << attribution.dump(2) << '\n';
  }

  const std::vector<Point3> reference = archive_points(pooled);
  for (const RunRecord& r : runs) {
    std::ofstream out(r.dir / "metrics.json");
    out << metrics_report(r.run_id, archive_points(r.archive), reference).dump(2) << '\n';
  }
  return exp.output_dir;
}

}  // namespace bikeshare
