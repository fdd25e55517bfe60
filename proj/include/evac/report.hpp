#ifndef EVAC_REPORT_HPP_
#define EVAC_REPORT_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "evac/network.hpp"
#include "evac/policies.hpp"
#include "evac/scenario_types.hpp"
#include "evac/simulator.hpp"

namespace evac {

struct EpisodeResult {
  std::uint64_t seed = 0;
  std::string scenario_hash;
  HazardLabel label = HazardLabel::random;
  double total_reward = 0.0;
  double total_passenger_time = 0.0;  // minutes
  double total_penalty = 0.0;
  double weighted_abs_r_pb = 0.0;     // sum |r_pb| * T
  double cost_weight = 0.0;           // sum T
  std::int64_t evacuated = 0;
  bool completed = false;
  std::vector<TripRecord> trips;
  EpisodeTrace trace;                 // filled only when requested
};

// Drives one full episode under a policy. The scenario's disabled links are
// already expected to be absent from `net`.
EpisodeResult run_episode(const Network& net, const Scenario& scenario, const SimConfig& config,
                          Policy& policy, std::uint64_t seed, bool keep_trace = false);

// Content fingerprint for paired-seed verification across strategies.
std::string scenario_hash(const Scenario& scenario);

struct Histogram {
  double bin_width = 5.0;
  std::vector<std::int64_t> counts;  // bin i covers [i*w, (i+1)*w)

  std::int64_t total() const;
};

Histogram make_histogram(const std::vector<std::pair<double, std::int64_t>>& weighted_values,
                         double bin_width);
void write_histogram_csv(const std::string& path, const Histogram& hist);

struct RunReport {
  std::string strategy;
  int episodes = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> scenario_hashes;
  double mean_total_evacuation_time = 0.0;  // passenger-minutes per episode
  double sum_total_evacuation_time = 0.0;
  double mean_total_reward = 0.0;
  double overall_abs_r_pb = 0.0;  // cost-weighted unless weighted_r_pb = false
  std::map<std::string, double> per_label_abs_r_pb;
  std::int64_t evacuated_total = 0;
  int completed_episodes = 0;
  bool totals_consistent = true;  // trip-log recomputation matched on completed episodes
  Histogram travel_hist;
  Histogram waiting_hist;
  std::vector<EpisodeResult> episode_results;
};

struct RunSpec {
  const Network* net = nullptr;  // base network; disabled links applied per scenario
  std::vector<Scenario> scenarios;
  SimConfig config;
  int episodes_per_scenario = 1;
  std::uint64_t seed_base = 0;
  double histogram_bin_width = 5.0;
  bool weighted_r_pb = true;  // step-cost-weighted mean vs plain mean of |r_pb|
};

RunReport run_strategy(Policy& policy, const RunSpec& spec);

void write_report_json(const std::string& path, const RunReport& report);
void write_trips_with_episode_csv(const std::string& path,
                                  const std::vector<EpisodeResult>& episodes);

// One row per strategy over the shared scenario set with identical seeds.
void write_comparison_csv(const std::string& path, const std::vector<RunReport>& reports);

}  // namespace evac

#endif  // EVAC_REPORT_HPP_
