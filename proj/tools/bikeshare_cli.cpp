// Batch entry point for the rebalancing toolkit: instance/scenario
// generation, optimization runs, baselines, metrics, and reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bikeshare/bikeshare.hpp"

namespace fs = std::filesystem;
using namespace bikeshare;

namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

std::vector<Point3> rows_to_points(const std::vector<FrontRow>& rows) {
  std::vector<Point3> pts;
  pts.reserve(rows.size());
  for (const FrontRow& r : rows) pts.push_back(to_point(r.objectives));
  return pts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust tri-objective bike rebalancing optimizer"};
  app.require_subcommand(1);

  // gen-instance -------------------------------------------------------
  auto* gen_inst = app.add_subcommand("gen-instance", "generate a synthetic instance");
  std::uint64_t gi_seed = 0;
  int gi_stations = 100, gi_trucks = 8, gi_capacity = 20;
  GeneratorParams gi_params;
  std::string gi_out = "instance.json";
  gen_inst->add_option("--seed", gi_seed, "rng seed")->required();
  gen_inst->add_option("--stations", gi_stations, "number of stations");
  gen_inst->add_option("--trucks", gi_trucks, "fleet size");
  gen_inst->add_option("--capacity", gi_capacity, "truck capacity (bikes)");
  gen_inst->add_option("--square-size", gi_params.square_size, "placement square side");
  gen_inst->add_option("--cap-min", gi_params.cap_min, "minimum dock capacity");
  gen_inst->add_option("--cap-max", gi_params.cap_max, "maximum dock capacity");
  gen_inst->add_option("-o,--out", gi_out, "output instance file");

  // gen-scenarios ------------------------------------------------------
  auto* gen_scen = app.add_subcommand("gen-scenarios", "sample a synthetic scenario set");
  std::uint64_t gs_seed = 0;
  std::string gs_instance, gs_out = "scenarios.json";
  int gs_count = 15;
  DemandModel gs_model;
  gen_scen->add_option("--seed", gs_seed, "rng seed")->required();
  gen_scen->add_option("--instance", gs_instance, "instance file")->required();
  gen_scen->add_option("--count", gs_count, "number of scenarios");
  gen_scen->add_option("--mean-span", gs_model.mean_span, "station demand mean span");
  gen_scen->add_option("--sigma", gs_model.sigma, "demand dispersion");
  gen_scen->add_option("-o,--out", gs_out, "output scenario file");

  // optimize -----------------------------------------------------------
  auto* optimize = app.add_subcommand("optimize", "run NSGA-II on an instance");
  std::string opt_instance, opt_scenarios, opt_outdir = ".";
  std::uint64_t opt_seed = 0;
  std::string opt_operator = "BB1-MAX";
  std::string opt_crossover, opt_perm_mutation, opt_run_id = "nsga2";
  int opt_mu = 200, opt_generations = 500;
  double opt_pc = -1, opt_pm_r = -1, opt_pm_t = -1, opt_epsilon = -1;
  bool opt_no_unvisited = false;
  optimize->add_option("--instance", opt_instance, "instance file")->required();
  optimize->add_option("--scenarios", opt_scenarios, "scenario file")->required();
  optimize->add_option("--seed", opt_seed, "rng seed")->required();
  optimize->add_option("--operator", opt_operator,
                       "domain mutation: AB2, BB1-MIN, BB1-MAX, BB2-MIN, BB2-MAX");
  optimize->add_option("--mu", opt_mu, "population size");
  optimize->add_option("--generations", opt_generations, "generation count");
  optimize->add_option("--crossover", opt_crossover, "OX, PMX, ERX, EERX");
  optimize->add_option("--perm-mutation", opt_perm_mutation, "IM, BMM, BSM, SM");
  optimize->add_option("--pc", opt_pc, "crossover probability");
  optimize->add_option("--pm-r", opt_pm_r, "permutation mutation probability");
  optimize->add_option("--pm-t", opt_pm_t, "domain mutation probability");
  optimize->add_option("--epsilon", opt_epsilon, "BB2 roulette smoothing");
  optimize->add_flag("--exclude-unvisited", opt_no_unvisited,
                     "restrict domain mutations to true routes");
  optimize->add_option("--run-id", opt_run_id, "run id written to the front CSV");
  optimize->add_option("--out-dir", opt_outdir, "output directory");

  // baseline -----------------------------------------------------------
  auto* baseline = app.add_subcommand("baseline", "run a greedy constructive baseline");
  std::string bl_instance, bl_scenarios, bl_outdir = ".", bl_heuristic = "rrcp-bi";
  std::string bl_preset = "SD", bl_run_id;
  std::uint64_t bl_seed = 0;
  int bl_m_max = -1;
  double bl_beta_pick = -1, bl_beta_drop = -1, bl_lambda = -1, bl_epsilon = -1;
  double bl_d1 = -1, bl_d2 = -1, bl_gamma = -1;
  baseline->add_option("--instance", bl_instance, "instance file")->required();
  baseline->add_option("--scenarios", bl_scenarios, "scenario file")->required();
  baseline->add_option("--seed", bl_seed, "rng seed")->required();
  baseline->add_option("--heuristic", bl_heuristic, "rrcp-bi or globe");
  baseline->add_option("--preset", bl_preset, "Dist, Serv, or SD");
  baseline->add_option("--m-max", bl_m_max, "RRCP-BI candidate list size");
  baseline->add_option("--beta-pick", bl_beta_pick, "RRCP-BI pickup pressure");
  baseline->add_option("--beta-drop", bl_beta_drop, "RRCP-BI drop pressure");
  baseline->add_option("--lambda", bl_lambda, "RRCP-BI load-balancing penalty");
  baseline->add_option("--epsilon", bl_epsilon, "numerical stability constant");
  baseline->add_option("--d1", bl_d1, "GLOBE pickup distance threshold");
  baseline->add_option("--d2", bl_d2, "GLOBE drop distance threshold");
  baseline->add_option("--gamma", bl_gamma, "GLOBE selection pressure");
  baseline->add_option("--run-id", bl_run_id, "run id written to the front CSV");
  baseline->add_option("--out-dir", bl_outdir, "output directory");

  // metrics ------------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "indicators of a front vs a reference");
  std::string mt_front, mt_reference, mt_out = "metrics.json", mt_run_id = "run";
  metrics_cmd->add_option("--front", mt_front, "front CSV")->required();
  metrics_cmd->add_option("--reference", mt_reference, "reference front CSV")->required();
  metrics_cmd->add_option("--run-id", mt_run_id, "run id for the report");
  metrics_cmd->add_option("-o,--out", mt_out, "output JSON file");

  // report -------------------------------------------------------------
  auto* report = app.add_subcommand("report", "problem-centric summaries");
  auto* rp_trucks = report->add_subcommand("trucks", "front grouped by trucks used");
  std::string rt_front, rt_out = "by_truck_count.json";
  rp_trucks->add_option("--front", rt_front, "front CSV")->required();
  rp_trucks->add_option("-o,--out", rt_out, "output JSON file");
  auto* rp_shortfall = report->add_subcommand("shortfall", "per-station unmet histogram");
  std::string rs_instance, rs_scenarios, rs_front, rs_out = "shortfall.json";
  int rs_scenario = 0, rs_solution = 0;
  rp_shortfall->add_option("--instance", rs_instance, "instance file")->required();
  rp_shortfall->add_option("--scenarios", rs_scenarios, "scenario file")->required();
  rp_shortfall->add_option("--front", rs_front, "front CSV holding the plan")->required();
  rp_shortfall->add_option("--solution", rs_solution, "solution_id within the front");
  rp_shortfall->add_option("--scenario", rs_scenario, "scenario index");
  rp_shortfall->add_option("-o,--out", rs_out, "output JSON file");
  report->require_subcommand(1);

  // experiment ---------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "run a campaign from a JSON config");
  std::string ex_config;
  experiment->add_option("--config", ex_config, "experiment JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const unsigned workers = worker_count_from_env(1);

    if (*gen_inst) {
      save_instance(generate_instance(gi_seed, gi_stations, gi_trucks, gi_capacity, gi_params),
                    gi_out);
    } else if (*gen_scen) {
      const Instance inst = load_instance(gs_instance);
      save_scenarios(sample_scenarios(gs_seed, inst, gs_count, gs_model), gs_out);
    } else if (*optimize) {
      const Instance inst = load_instance(opt_instance);
      const ScenarioSet set = load_scenarios(opt_scenarios, inst);
      RunConfig cfg;
      cfg.operators = operator_preset(parse_domain_mutation(opt_operator));
      cfg.mu = opt_mu;
      cfg.generations = opt_generations;
      cfg.seed = opt_seed;
      cfg.workers = workers;
      if (!opt_crossover.empty()) cfg.operators.crossover = parse_crossover(opt_crossover);
      if (!opt_perm_mutation.empty())
        cfg.operators.perm_mutation = parse_perm_mutation(opt_perm_mutation);
      if (opt_pc >= 0) cfg.operators.crossover_prob = opt_pc;
      if (opt_pm_r >= 0) cfg.operators.perm_mutation_prob = opt_pm_r;
      if (opt_pm_t >= 0) cfg.operators.domain_mutation_prob = opt_pm_t;
      if (opt_epsilon >= 0) cfg.operators.epsilon = opt_epsilon;
      cfg.operators.include_unvisited_segment = !opt_no_unvisited;
      const RunResult result = run_nsga2(inst, set, cfg, opt_run_id);
      fs::create_directories(opt_outdir);
      write_front_csv((fs::path(opt_outdir) / "front.csv").string(),
                      archive_to_rows(result.front, opt_run_id));
      write_stats_csv((fs::path(opt_outdir) / "stats.csv").string(), result.stats);
    } else if (*baseline) {
      const Instance inst = load_instance(bl_instance);
      const ScenarioSet set = load_scenarios(bl_scenarios, inst);
      const DemandProxy proxy = DemandProxy::from_scenarios(inst, set);
      RoutePlan plan;
      if (bl_heuristic == "rrcp-bi") {
        RrcpConfig cfg = rrcp_preset(bl_preset);
        cfg.seed = bl_seed;
        if (bl_m_max >= 1) cfg.m_max = bl_m_max;
        if (bl_beta_pick >= 0) cfg.beta_pick = bl_beta_pick;
        if (bl_beta_drop >= 0) cfg.beta_drop = bl_beta_drop;
        if (bl_lambda >= 0) cfg.lambda = bl_lambda;
        if (bl_epsilon > 0) cfg.epsilon = bl_epsilon;
        plan = rrcp_bi(inst, proxy, cfg);
      } else if (bl_heuristic == "globe") {
        GlobeConfig cfg = globe_preset(bl_preset);
        cfg.seed = bl_seed;
        if (bl_d1 > 0) cfg.d1 = bl_d1;
        if (bl_d2 > 0) cfg.d2 = bl_d2;
        if (bl_gamma >= 0) cfg.gamma = bl_gamma;
        if (bl_epsilon > 0) cfg.epsilon = bl_epsilon;
        plan = globe(inst, proxy, cfg);
      } else {
        throw Error("unknown heuristic '" + bl_heuristic + "' (expected rrcp-bi or globe)");
      }
      const std::string run_id =
          bl_run_id.empty() ? bl_heuristic + "_" + bl_preset : bl_run_id;
      FrontArchive archive;
      archive.insert({evaluate_plan(plan, inst, set), encode(plan), run_id});
      fs::create_directories(bl_outdir);
      write_front_csv((fs::path(bl_outdir) / "front.csv").string(),
                      archive_to_rows(archive, run_id));
    } else if (*metrics_cmd) {
      const auto front = rows_to_points(read_front_csv(mt_front));
      const auto reference = rows_to_points(read_front_csv(mt_reference));
      write_json_file(mt_out, metrics_report(mt_run_id, front, reference));
    } else if (*report) {
      if (*rp_trucks) {
        FrontArchive archive;
        for (const FrontRow& r : read_front_csv(rt_front))
          archive.insert({r.objectives, r.genome, r.run_id});
        write_json_file(rt_out, report_by_truck_count(archive));
      } else {
        const Instance inst = load_instance(rs_instance);
        const ScenarioSet set = load_scenarios(rs_scenarios, inst);
        const std::vector<FrontRow> rows = read_front_csv(rs_front);
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const FrontRow& r) {
          return r.solution_id == rs_solution;
        });
        if (it == rows.end())
          throw Error("solution_id " + std::to_string(rs_solution) + " not found in front");
        if (rs_scenario < 0 || rs_scenario >= set.scenario_count())
          throw Error("scenario index out of range");
        write_json_file(rs_out,
                        report_station_shortfall(decode(it->genome), inst, set, rs_scenario));
      }
    } else if (*experiment) {
      Experiment exp = parse_experiment(load_json_file(ex_config));
      exp.workers = workers;
      std::cout << run_experiment(exp) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
