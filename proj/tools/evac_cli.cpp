// Command-line experiment runner: episode execution under any dispatch
// strategy, PPO training, strategy comparison, scripted replay, GTFS fleet
// snapshots and hazard scenario generation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evac/env.hpp"
#include "evac/errors.hpp"
#include "evac/gtfs.hpp"
#include "evac/network.hpp"
#include "evac/policies.hpp"
#include "evac/ppo.hpp"
#include "evac/report.hpp"
#include "evac/scenario.hpp"
#include "evac/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NetworkArgs {
  std::string nodes, links, zones;

  void attach(CLI::App* cmd) {
    cmd->add_option("--nodes", nodes, "node table CSV")->required();
    cmd->add_option("--links", links, "link table CSV")->required();
    cmd->add_option("--zones", zones, "zone table CSV")->required();
  }

  evac::Network load() const { return evac::load_network(nodes, links, zones); }
};

struct SimArgs {
  double delta_t = 1.0;
  int max_steps = 200;
  bool equity = false;
  std::string penalty_mode = "point_biserial";

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta-t", delta_t, "step length in minutes")->check(CLI::PositiveNumber);
    cmd->add_option("--max-steps", max_steps, "episode step cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--equity", equity, "add the inequity penalty to the reward");
    cmd->add_option("--penalty-mode", penalty_mode, "point_biserial | epc_waiting");
  }

  evac::SimConfig config() const {
    evac::SimConfig cfg;
    cfg.delta_t = evac::Duration::from_minutes(delta_t);
    cfg.max_steps = max_steps;
    cfg.equity_enabled = equity;
    if (penalty_mode == "point_biserial") {
      cfg.penalty_mode = evac::PenaltyMode::point_biserial;
    } else if (penalty_mode == "epc_waiting") {
      cfg.penalty_mode = evac::PenaltyMode::epc_waiting;
    } else {
      throw evac::UsageError("unknown penalty mode '" + penalty_mode + "'");
    }
    return cfg;
  }
};

evac::Scenario load_scenario(const evac::Network& net, const std::string& scenario_path,
                             const std::string& buses_path) {
  if (!scenario_path.empty()) return evac::read_scenario_json(scenario_path);
  if (!buses_path.empty()) {
    return evac::scenario_from_network(net, evac::read_bus_placements_csv(buses_path));
  }
  throw evac::UsageError("either --scenario or --buses is required");
}

// "name" or "ppo:checkpoint.json".
std::unique_ptr<evac::Policy> make_policy(const std::string& spec,
                                          const std::string& checkpoint_opt,
                                          const evac::SimConfig& config) {
  std::string name = spec;
  std::string ckpt_path = checkpoint_opt;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    name = spec.substr(0, colon);
    ckpt_path = spec.substr(colon + 1);
  }
  if (name == "ppo") {
    if (ckpt_path.empty()) {
      throw evac::UsageError("policy 'ppo' requires --checkpoint (or ppo:<path>)");
    }
    const evac::ppo::Checkpoint ckpt = evac::ppo::load_checkpoint(ckpt_path);
    return std::make_unique<evac::ppo::PpoPolicy>(ckpt.params, config);
  }
  return evac::make_baseline_policy(name);
}

void write_run_outputs(const std::string& out_dir, const evac::RunReport& report,
                       bool with_trace) {
  fs::create_directories(out_dir);
  evac::write_report_json((fs::path(out_dir) / "report.json").string(), report);
  evac::write_trips_with_episode_csv((fs::path(out_dir) / "trips.csv").string(),
                                     report.episode_results);
  evac::write_histogram_csv((fs::path(out_dir) / "travel_hist.csv").string(),
                            report.travel_hist);
  evac::write_histogram_csv((fs::path(out_dir) / "waiting_hist.csv").string(),
                            report.waiting_hist);
  if (with_trace && !report.episode_results.empty()) {
    evac::write_trace_jsonl((fs::path(out_dir) / "trace.jsonl").string(),
                            report.episode_results.front().trace);
  }
}

int cmd_run(const NetworkArgs& net_args, const SimArgs& sim_args, const std::string& scenario_path,
            const std::string& buses_path, const std::string& policy_name,
            const std::string& checkpoint, int episodes, std::uint64_t seed,
            const std::string& out_dir, double bin_width, bool trace) {
  const evac::Network net = net_args.load();
  for (const auto& w : net.warnings()) std::cerr << "warning: " << w << "\n";
  const evac::SimConfig config = sim_args.config();
  const evac::Scenario scenario = load_scenario(net, scenario_path, buses_path);

  evac::RunSpec spec;
  spec.net = &net;
  spec.scenarios = {scenario};
  spec.config = config;
  spec.episodes_per_scenario = episodes;
  spec.seed_base = seed;
  spec.histogram_bin_width = bin_width;

  auto policy = make_policy(policy_name, checkpoint, config);
  evac::RunReport report = evac::run_strategy(*policy, spec);
  if (trace) {
    // Re-run the first episode keeping its trace.
    const evac::Network effective = scenario.disabled_links.empty()
                                        ? net
                                        : net.without_links(scenario.disabled_links);
    report.episode_results.front() =
        evac::run_episode(effective, scenario, config, *policy, seed, true);
  }
  write_run_outputs(out_dir, report, trace);
  std::cout << "strategy " << report.strategy << ": " << report.episodes << " episode(s), "
            << "mean passenger time " << report.mean_total_evacuation_time << " min, |r_pb| "
            << report.overall_abs_r_pb << ", evacuated " << report.evacuated_total << "\n";
  return 0;
}

int cmd_compare(const NetworkArgs& net_args, const SimArgs& sim_args,
                const std::vector<std::string>& scenario_paths,
                const std::vector<std::string>& strategies, int episodes, std::uint64_t seed,
                const std::string& out_dir, bool unweighted_rpb) {
  if (strategies.size() < 2) throw evac::UsageError("compare needs at least two --strategy");
  const evac::Network net = net_args.load();
  const evac::SimConfig config = sim_args.config();

  evac::RunSpec spec;
  spec.net = &net;
  spec.config = config;
  spec.episodes_per_scenario = episodes;
  spec.seed_base = seed;
  spec.weighted_r_pb = !unweighted_rpb;
  for (const auto& path : scenario_paths) spec.scenarios.push_back(evac::read_scenario_json(path));

  std::vector<evac::RunReport> reports;
  for (const auto& strategy : strategies) {
    auto policy = make_policy(strategy, "", config);
    reports.push_back(evac::run_strategy(*policy, spec));
    std::cout << reports.back().strategy << ": mean passenger time "
              << reports.back().mean_total_evacuation_time << " min, |r_pb| "
              << reports.back().overall_abs_r_pb << "\n";
  }

  fs::create_directories(out_dir);
  evac::write_comparison_csv((fs::path(out_dir) / "comparison.csv").string(), reports);
  for (const auto& r : reports) {
    evac::write_report_json((fs::path(out_dir) / ("report_" + r.strategy + ".json")).string(), r);
  }
  return 0;
}

evac::ppo::PpoConfig ppo_config_from_json(const json& j) {
  evac::ppo::PpoConfig cfg;
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.clip_epsilon = j.value("clip_epsilon", cfg.clip_epsilon);
  cfg.gae_lambda = j.value("gae_lambda", cfg.gae_lambda);
  cfg.value_coef = j.value("value_coef", cfg.value_coef);
  cfg.entropy_coef = j.value("entropy_coef", cfg.entropy_coef);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.rollout_steps = j.value("rollout_steps", cfg.rollout_steps);
  cfg.epochs_per_update = j.value("epochs_per_update", cfg.epochs_per_update);
  cfg.minibatch_size = j.value("minibatch_size", cfg.minibatch_size);
  cfg.total_updates = j.value("total_updates", cfg.total_updates);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.hidden_units = j.value("hidden_units", cfg.hidden_units);
  cfg.normalize_advantages = j.value("normalize_advantages", cfg.normalize_advantages);
  cfg.scale_rewards = j.value("scale_rewards", cfg.scale_rewards);
  cfg.early_stop = j.value("early_stop", cfg.early_stop);
  cfg.plateau_patience = j.value("plateau_patience", cfg.plateau_patience);
  cfg.plateau_tolerance = j.value("plateau_tolerance", cfg.plateau_tolerance);
  return cfg;
}

int cmd_train(const std::string& config_path, const std::string& out_ckpt,
              const std::string& log_path, const std::string& resume) {
  std::ifstream in(config_path);
  if (!in) throw evac::DataError("cannot open training config '" + config_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw evac::DataError(std::string("training config: ") + e.what());
  }

  const json& env_spec = j.at("env");
  const evac::Network net = evac::load_network(env_spec.at("nodes").get<std::string>(),
                                               env_spec.at("links").get<std::string>(),
                                               env_spec.at("zones").get<std::string>());
  evac::SimConfig sim;
  sim.delta_t = evac::Duration::from_minutes(env_spec.value("delta_t", 1.0));
  sim.max_steps = env_spec.value("max_steps", 200);
  sim.equity_enabled = env_spec.value("equity_enabled", false);
  const std::string penalty = env_spec.value("penalty_mode", std::string("point_biserial"));
  if (penalty == "epc_waiting") sim.penalty_mode = evac::PenaltyMode::epc_waiting;
  else if (penalty == "point_biserial") sim.penalty_mode = evac::PenaltyMode::point_biserial;
  else throw evac::DataError("training config: unknown penalty_mode '" + penalty + "'");

  evac::Scenario scenario =
      load_scenario(net, env_spec.value("scenario", std::string()),
                    env_spec.value("buses", std::string()));
  const evac::Network effective =
      scenario.disabled_links.empty() ? net : net.without_links(scenario.disabled_links);

  evac::ppo::PpoConfig ppo_cfg = ppo_config_from_json(j.value("ppo", json::object()));

  evac::ScenarioEnv env(effective, scenario, sim);
  evac::Rng init_rng(ppo_cfg.seed);
  evac::ppo::PolicyParams params;
  std::int64_t base_updates = 0;
  if (!resume.empty()) {
    const evac::ppo::Checkpoint ckpt = evac::ppo::load_checkpoint(resume);
    evac::ppo::require_layout_match(ckpt, env.layout());
    params = ckpt.params;
    base_updates = ckpt.update_count;
  } else {
    params = evac::ppo::PolicyParams::init(env.layout(), ppo_cfg.hidden_units, init_rng);
  }

  evac::ppo::TrainResult result = evac::ppo::train(env, std::move(params), ppo_cfg);

  evac::ppo::Checkpoint out;
  out.params = std::move(result.params);
  out.config = ppo_cfg;
  out.update_count = base_updates + result.update_count;
  evac::ppo::save_checkpoint(out_ckpt, out);

  if (!log_path.empty()) {
    std::ofstream log(log_path);
    if (!log) throw evac::DataError("cannot write training log '" + log_path + "'");
    log << "update,mean_episode_reward,clip_term,value_term,entropy,total\n";
    for (const auto& row : result.log) {
      log << row.update << ',' << row.mean_episode_reward << ',' << row.clip_term << ','
          << row.value_term << ',' << row.entropy_term << ',' << row.total << "\n";
    }
  }
  std::cout << "trained " << result.update_count << " update(s); checkpoint written to "
            << out_ckpt << "\n";
  return 0;
}

int cmd_replay(const NetworkArgs& net_args, const SimArgs& sim_args,
               const std::string& scenario_path, const std::string& buses_path,
               const std::string& script_path, const std::string& out_dir) {
  const evac::Network net = net_args.load();
  const evac::SimConfig config = sim_args.config();
  const evac::Scenario scenario = load_scenario(net, scenario_path, buses_path);
  const evac::Network effective =
      scenario.disabled_links.empty() ? net : net.without_links(scenario.disabled_links);

  const evac::ReplayScript script = evac::read_replay_script(script_path);
  const evac::EpisodeTrace trace = evac::replay(effective, scenario, config, script);

  fs::create_directories(out_dir);
  evac::write_trips_csv((fs::path(out_dir) / "trips.csv").string(), trace.trips);
  evac::write_trace_jsonl((fs::path(out_dir) / "trace.jsonl").string(), trace);
  std::cout << "replay: total passenger time " << trace.total_passenger_time
            << " min, penalty " << trace.total_penalty << ", reward " << trace.total_reward
            << ", evacuated " << trace.evacuated << (trace.completed ? " (completed)" : "")
            << "\n";
  return 0;
}

int cmd_gtfs_snapshot(const NetworkArgs& net_args, const std::string& gtfs_dir,
                      const std::string& weekday, const std::string& time_text,
                      int default_capacity, const std::string& out_csv) {
  const evac::Network net = net_args.load();
  const evac::gtfs::GtfsFeed feed = evac::gtfs::parse_feed(gtfs_dir);
  const evac::gtfs::FleetSnapshot snap = evac::gtfs::positions_at(
      feed, evac::gtfs::parse_weekday(weekday), evac::gtfs::parse_gtfs_time(time_text));
  const std::vector<evac::BusPlacement> placements =
      evac::gtfs::snap_to_network(snap, net, default_capacity);
  evac::write_bus_placements_csv(out_csv, net, placements);
  std::cout << "snapshot at " << weekday << " " << time_text << ": " << placements.size()
            << " active bus(es) written to " << out_csv << "\n";
  return 0;
}

int cmd_gen_scenario(const NetworkArgs& net_args, const std::string& spec_path,
                     const std::string& fleet_csv, const std::string& gtfs_dir,
                     const std::string& weekday, const std::string& time_text, int capacity,
                     const std::string& out_dir) {
  const evac::Network net = net_args.load();
  const evac::HazardSpec spec = evac::read_hazard_spec(spec_path);

  std::vector<evac::BusPlacement> fleet;
  if (!fleet_csv.empty()) {
    fleet = evac::read_bus_placements_csv(fleet_csv);
  } else if (!gtfs_dir.empty()) {
    const evac::gtfs::GtfsFeed feed = evac::gtfs::parse_feed(gtfs_dir);
    const evac::gtfs::FleetSnapshot snap = evac::gtfs::positions_at(
        feed, evac::gtfs::parse_weekday(weekday), evac::gtfs::parse_gtfs_time(time_text));
    fleet = evac::gtfs::snap_to_network(snap, net, capacity);
  } else {
    throw evac::UsageError("gen-scenario needs --fleet or --gtfs");
  }

  const evac::BuildResult built = evac::build_scenario(spec, net, std::move(fleet));
  for (const auto& w : built.report.warnings) std::cerr << "warning: " << w << "\n";

  fs::create_directories(out_dir);
  evac::write_scenario_json((fs::path(out_dir) / "scenario.json").string(), built.scenario);
  evac::write_scenario_nodes_csv((fs::path(out_dir) / "nodes.csv").string(), built.scenario, net);
  evac::write_bus_placements_csv((fs::path(out_dir) / "buses.csv").string(), net,
                                 built.scenario.bus_placements);
  std::cout << "scenario with " << built.scenario.impaired_zones.size()
            << " impaired zone(s) written to " << out_dir
            << (built.report.feasible ? "" : " (WARNING: infeasible)") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bus evacuation planning: simulation, dispatch baselines and PPO training"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute seeded episodes under one policy");
  NetworkArgs run_net;
  SimArgs run_sim;
  run_net.attach(run);
  run_sim.attach(run);
  std::string run_scenario, run_buses, run_policy = "greedy", run_ckpt, run_out = "out";
  int run_episodes = 1;
  std::uint64_t run_seed = 0;
  double run_bin = 5.0;
  bool run_trace = false;
  run->add_option("--scenario", run_scenario, "scenario JSON");
  run->add_option("--buses", run_buses, "fleet CSV (demands from the node table)");
  run->add_option("--policy", run_policy, "pi1 | pi2 | rule1 | rule2 | greedy | ppo");
  run->add_option("--checkpoint", run_ckpt, "PPO checkpoint (policy ppo)");
  run->add_option("--episodes", run_episodes)->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed);
  run->add_option("--out", run_out, "output directory");
  run->add_option("--bin-width", run_bin, "histogram bin width, minutes");
  run->add_flag("--trace", run_trace, "export the first episode's step trace");

  // compare
  auto* compare = app.add_subcommand("compare", "run several strategies on a shared scenario set");
  NetworkArgs cmp_net;
  SimArgs cmp_sim;
  cmp_net.attach(compare);
  cmp_sim.attach(compare);
  std::vector<std::string> cmp_scenarios, cmp_strategies;
  int cmp_episodes = 1;
  std::uint64_t cmp_seed = 0;
  std::string cmp_out = "out";
  bool cmp_unweighted = false;
  compare->add_option("--scenario", cmp_scenarios, "scenario JSON (repeatable)")->required();
  compare->add_option("--strategy", cmp_strategies, "strategy name or ppo:<ckpt> (repeatable)")
      ->required();
  compare->add_option("--episodes", cmp_episodes)->check(CLI::PositiveNumber);
  compare->add_option("--seed", cmp_seed);
  compare->add_option("--out", cmp_out);
  compare->add_flag("--unweighted-rpb", cmp_unweighted,
                    "plain mean of per-episode |r_pb| instead of cost-weighted");

  // train
  auto* train = app.add_subcommand("train", "train the PPO agent");
  std::string train_config, train_out = "checkpoint.json", train_log, train_resume;
  train->add_option("--config", train_config, "training config JSON")->required();
  train->add_option("--out", train_out, "checkpoint output path");
  train->add_option("--log", train_log, "training log CSV");
  train->add_option("--resume", train_resume, "checkpoint to continue from");

  // replay
  auto* replay = app.add_subcommand("replay", "drive a scripted destination sequence");
  NetworkArgs rep_net;
  SimArgs rep_sim;
  rep_net.attach(replay);
  rep_sim.attach(replay);
  std::string rep_scenario, rep_buses, rep_script, rep_out = "out";
  replay->add_option("--scenario", rep_scenario, "scenario JSON");
  replay->add_option("--buses", rep_buses, "fleet CSV");
  replay->add_option("--script", rep_script, "replay script JSON")->required();
  replay->add_option("--out", rep_out);

  // gtfs-snapshot
  auto* snap = app.add_subcommand("gtfs-snapshot", "reconstruct fleet positions from a GTFS feed");
  NetworkArgs snap_net;
  snap_net.attach(snap);
  std::string snap_gtfs, snap_weekday = "monday", snap_time = "10:00:00",
              snap_out = "placements.csv";
  int snap_capacity = 40;
  snap->add_option("--gtfs", snap_gtfs, "GTFS directory")->required();
  snap->add_option("--weekday", snap_weekday);
  snap->add_option("--time", snap_time, "HH:MM:SS");
  snap->add_option("--capacity", snap_capacity, "default seats per bus");
  snap->add_option("--out", snap_out, "placement CSV path");

  // gen-scenario
  auto* gen = app.add_subcommand("gen-scenario", "build a hazard scenario");
  NetworkArgs gen_net;
  gen_net.attach(gen);
  std::string gen_spec, gen_fleet, gen_gtfs, gen_weekday = "monday", gen_time = "10:00:00",
              gen_out = "scenario_out";
  int gen_capacity = 40;
  gen->add_option("--spec", gen_spec, "hazard spec JSON")->required();
  gen->add_option("--fleet", gen_fleet, "fleet CSV");
  gen->add_option("--gtfs", gen_gtfs, "GTFS directory for fleet initialization");
  gen->add_option("--weekday", gen_weekday);
  gen->add_option("--time", gen_time);
  gen->add_option("--capacity", gen_capacity);
  gen->add_option("--out", gen_out, "output directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      return cmd_run(run_net, run_sim, run_scenario, run_buses, run_policy, run_ckpt,
                     run_episodes, run_seed, run_out, run_bin, run_trace);
    }
    if (compare->parsed()) {
      return cmd_compare(cmp_net, cmp_sim, cmp_scenarios, cmp_strategies, cmp_episodes, cmp_seed,
                         cmp_out, cmp_unweighted);
    }
    if (train->parsed()) return cmd_train(train_config, train_out, train_log, train_resume);
    if (replay->parsed()) {
      return cmd_replay(rep_net, rep_sim, rep_scenario, rep_buses, rep_script, rep_out);
    }
    if (snap->parsed()) {
      return cmd_gtfs_snapshot(snap_net, snap_gtfs, snap_weekday, snap_time, snap_capacity,
                               snap_out);
    }
    if (gen->parsed()) {
      return cmd_gen_scenario(gen_net, gen_spec, gen_fleet, gen_gtfs, gen_weekday, gen_time,
                              gen_capacity, gen_out);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const evac::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const evac::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const evac::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const evac::ContractError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
