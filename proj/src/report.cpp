#include "evac/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"

#include "evac/csv.hpp"
#include "evac/errors.hpp"

namespace evac {

namespace {

std::uint64_t fnv1a_append(std::uint64_t h, const std::string& data) {
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string scenario_hash(const Scenario& scenario) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& z : scenario.impaired_zones) h = fnv1a_append(h, z + ";");
  for (const auto& [node, demand] : scenario.origin_demands) {
    h = fnv1a_append(h, node + "=" + std::to_string(demand) + ";");
  }
  for (const auto& p : scenario.bus_placements) {
    h = fnv1a_append(h, p.bus_id + "@" + std::to_string(p.link_id) + "+" +
                            std::to_string(p.time_to_travel.tenths()) + "c" +
                            std::to_string(p.capacity) + ">" + p.destination + ";");
  }
  for (const auto l : scenario.disabled_links) h = fnv1a_append(h, std::to_string(l) + ";");
  h = fnv1a_append(h, hazard_label_name(scenario.hazard_label));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EpisodeResult run_episode(const Network& net, const Scenario& scenario, const SimConfig& config,
                          Policy& policy, std::uint64_t seed, bool keep_trace) {
  EpisodeResult result;
  result.seed = seed;
  result.scenario_hash = scenario_hash(scenario);
  result.label = scenario.hazard_label;

  SimState state = reset(net, scenario, config, seed);
  Rng rng(seed);
  bool done = state.evacuation_complete();
  while (!done) {
    const MaskSet masks = masks_for(state, net);
    const ActionSet actions = policy.decide(state, net, masks, rng);
    const StepOutcome out = step(state, actions, net, config);
    result.total_reward += out.reward;
    if (keep_trace) {
      TraceStep ts;
      ts.step = state.steps;
      ts.clock_minutes = state.clock().minutes();
      ts.reward = out.reward;
      for (const Bus& bus : state.buses) {
        ts.buses.push_back({bus.bus_id, bus.capacity, bus.onboard,
                            net.nodes()[bus.destination].node_id});
      }
      result.trace.steps.push_back(std::move(ts));
    }
    done = out.done;
  }

  result.total_passenger_time = static_cast<double>(state.passenger_time_tenths) / 10.0;
  result.total_penalty = state.penalty_total;
  result.weighted_abs_r_pb = state.equity_weight_sum;
  result.cost_weight = result.total_passenger_time;
  result.evacuated = state.evacuated;
  result.completed = state.evacuation_complete();
  result.trips = state.trips;
  if (keep_trace) {
    result.trace.trips = state.trips;
    result.trace.total_reward = result.total_reward;
    result.trace.total_passenger_time = result.total_passenger_time;
    result.trace.total_penalty = result.total_penalty;
    result.trace.evacuated = result.evacuated;
    result.trace.completed = result.completed;
  }
  return result;
}

std::int64_t Histogram::total() const {
  std::int64_t sum = 0;
  for (const auto c : counts) sum += c;
  return sum;
}

Histogram make_histogram(const std::vector<std::pair<double, std::int64_t>>& weighted_values,
                         double bin_width) {
  if (bin_width <= 0.0) throw ContractError("histogram bin width must be positive");
  Histogram hist;
  hist.bin_width = bin_width;
  for (const auto& [value, count] : weighted_values) {
    const auto bin = static_cast<std::size_t>(std::max(0.0, value) / bin_width);
    if (hist.counts.size() <= bin) hist.counts.resize(bin + 1, 0);
    hist.counts[bin] += count;
  }
  return hist;
}

void write_histogram_csv(const std::string& path, const Histogram& hist) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    char lo[32], hi[32];
    std::snprintf(lo, sizeof(lo), "%g", static_cast<double>(i) * hist.bin_width);
    std::snprintf(hi, sizeof(hi), "%g", static_cast<double>(i + 1) * hist.bin_width);
    rows.push_back({lo, hi, std::to_string(hist.counts[i])});
  }
  csv::write_file(path, {"bin_start", "bin_end", "count"}, rows);
}

RunReport run_strategy(Policy& policy, const RunSpec& spec) {
  if (!spec.net) throw ContractError("run_strategy: network required");
  if (spec.scenarios.empty()) throw ContractError("run_strategy: at least one scenario required");

  RunReport report;
  report.strategy = policy.name();
  report.travel_hist.bin_width = spec.histogram_bin_width;
  report.waiting_hist.bin_width = spec.histogram_bin_width;

  std::vector<std::pair<double, std::int64_t>> travel_values;
  std::vector<std::pair<double, std::int64_t>> waiting_values;
  double weighted_r_sum = 0.0, weight_sum = 0.0;
  double plain_r_sum = 0.0;
  std::int64_t plain_r_count = 0;
  std::map<std::string, std::pair<double, double>> label_sums;  // label -> (sum |r|T, sum T)
  std::map<std::string, std::pair<double, std::int64_t>> label_plain;

  for (std::size_t si = 0; si < spec.scenarios.size(); ++si) {
    const Scenario& scenario = spec.scenarios[si];
    const Network effective = scenario.disabled_links.empty()
                                  ? *spec.net
                                  : spec.net->without_links(scenario.disabled_links);
    for (int e = 0; e < spec.episodes_per_scenario; ++e) {
      const std::uint64_t seed = spec.seed_base + si * 1000003ull + static_cast<std::uint64_t>(e);
      EpisodeResult ep = run_episode(effective, scenario, spec.config, policy, seed);

      report.seeds.push_back(seed);
      report.scenario_hashes.push_back(ep.scenario_hash);
      report.sum_total_evacuation_time += ep.total_passenger_time;
      report.mean_total_reward += ep.total_reward;
      report.evacuated_total += ep.evacuated;
      if (ep.completed) ++report.completed_episodes;

      // Independent recomputation of the episode total from its trip log.
      if (ep.completed) {
        double recomputed = 0.0;
        for (const TripRecord& t : ep.trips) {
          recomputed += (t.trip_time.minutes() + t.waiting_time.minutes()) *
                        static_cast<double>(t.passengers);
        }
        if (std::abs(recomputed - ep.total_passenger_time) > 1e-6) {
          report.totals_consistent = false;
        }
      }

      for (const TripRecord& t : ep.trips) {
        travel_values.emplace_back(t.trip_time.minutes(), t.passengers);
        waiting_values.emplace_back(t.waiting_time.minutes(), t.passengers);
      }
      weighted_r_sum += ep.weighted_abs_r_pb;
      weight_sum += ep.cost_weight;
      if (ep.cost_weight > 0.0) {
        plain_r_sum += ep.weighted_abs_r_pb / ep.cost_weight;
        ++plain_r_count;
      }
      auto& ls = label_sums[hazard_label_name(ep.label)];
      ls.first += ep.weighted_abs_r_pb;
      ls.second += ep.cost_weight;
      auto& lp = label_plain[hazard_label_name(ep.label)];
      if (ep.cost_weight > 0.0) {
        lp.first += ep.weighted_abs_r_pb / ep.cost_weight;
        ++lp.second;
      }

      report.episode_results.push_back(std::move(ep));
    }
  }

  report.episodes = static_cast<int>(report.episode_results.size());
  report.mean_total_evacuation_time =
      report.sum_total_evacuation_time / std::max(1, report.episodes);
  report.mean_total_reward /= std::max(1, report.episodes);
  if (spec.weighted_r_pb) {
    report.overall_abs_r_pb = weight_sum > 0.0 ? weighted_r_sum / weight_sum : 0.0;
    for (const auto& [label, sums] : label_sums) {
      report.per_label_abs_r_pb[label] = sums.second > 0.0 ? sums.first / sums.second : 0.0;
    }
  } else {
    report.overall_abs_r_pb =
        plain_r_count > 0 ? plain_r_sum / static_cast<double>(plain_r_count) : 0.0;
    for (const auto& [label, sums] : label_plain) {
      report.per_label_abs_r_pb[label] =
          sums.second > 0 ? sums.first / static_cast<double>(sums.second) : 0.0;
    }
  }
  report.travel_hist = make_histogram(travel_values, spec.histogram_bin_width);
  report.waiting_hist = make_histogram(waiting_values, spec.histogram_bin_width);
  return report;
}

void write_report_json(const std::string& path, const RunReport& report) {
  nlohmann::json j;
  j["strategy"] = report.strategy;
  j["episodes"] = report.episodes;
  j["seeds"] = report.seeds;
  j["scenario_hashes"] = report.scenario_hashes;
  j["mean_total_evacuation_time"] = report.mean_total_evacuation_time;
  j["sum_total_evacuation_time"] = report.sum_total_evacuation_time;
  j["mean_total_reward"] = report.mean_total_reward;
  j["overall_abs_r_pb"] = report.overall_abs_r_pb;
  j["per_label_abs_r_pb"] = report.per_label_abs_r_pb;
  j["evacuated_total"] = report.evacuated_total;
  j["completed_episodes"] = report.completed_episodes;
  j["totals_consistent"] = report.totals_consistent;
  j["episodes_detail"] = nlohmann::json::array();
  for (const EpisodeResult& ep : report.episode_results) {
    j["episodes_detail"].push_back({{"seed", ep.seed},
                                    {"scenario_hash", ep.scenario_hash},
                                    {"hazard_label", hazard_label_name(ep.label)},
                                    {"total_reward", ep.total_reward},
                                    {"total_passenger_time", ep.total_passenger_time},
                                    {"total_penalty", ep.total_penalty},
                                    {"abs_r_pb", ep.cost_weight > 0.0
                                                     ? ep.weighted_abs_r_pb / ep.cost_weight
                                                     : 0.0},
                                    {"evacuated", ep.evacuated},
                                    {"completed", ep.completed}});
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report '" + path + "'");
  out << j.dump(2) << "\n";
}

void write_trips_with_episode_csv(const std::string& path,
                                  const std::vector<EpisodeResult>& episodes) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    for (const TripRecord& t : episodes[e].trips) {
      rows.push_back({std::to_string(e), t.bus_id, t.origin, t.destination,
                      t.trip_time.to_string(), t.waiting_time.to_string(),
                      std::to_string(t.passengers)});
    }
  }
  csv::write_file(path,
                  {"episode", "bus_id", "origin", "destination", "trip_time", "waiting_time",
                   "passengers"},
                  rows);
}

void write_comparison_csv(const std::string& path, const std::vector<RunReport>& reports) {
  std::set<std::string> labels;
  for (const RunReport& r : reports) {
    for (const auto& [label, _] : r.per_label_abs_r_pb) labels.insert(label);
  }
  std::vector<std::string> header = {"strategy", "episodes", "mean_total_evacuation_time",
                                     "overall_abs_r_pb"};
  for (const auto& label : labels) header.push_back(label + "_abs_r_pb");

  std::vector<std::vector<std::string>> rows;
  for (const RunReport& r : reports) {
    char time_buf[32], r_buf[32];
    std::snprintf(time_buf, sizeof(time_buf), "%.1f", r.mean_total_evacuation_time);
    std::snprintf(r_buf, sizeof(r_buf), "%.6f", r.overall_abs_r_pb);
    std::vector<std::string> row = {r.strategy, std::to_string(r.episodes), time_buf, r_buf};
    for (const auto& label : labels) {
      const auto it = r.per_label_abs_r_pb.find(label);
      if (it == r.per_label_abs_r_pb.end()) {
        row.push_back("");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", it->second);
        row.push_back(buf);
      }
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, header, rows);
}

}  // namespace evac
