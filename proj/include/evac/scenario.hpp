#ifndef EVAC_SCENARIO_HPP_
#define EVAC_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evac/gtfs.hpp"
#include "evac/network.hpp"
#include "evac/scenario_types.hpp"

namespace evac {

// Hazard description driving scenario generation: either an explicit list
// of impaired zones, or a seeded draw of `impairment_scale` zones.
struct HazardSpec {
  enum class Mode { reproduce, randomized };

  Mode mode = Mode::randomized;
  int impairment_scale = 1;
  std::vector<std::string> zone_list;              // reproduce mode
  std::map<std::string, double> zone_weights;      // optional, randomized mode
  std::uint64_t seed = 0;
  HazardLabel hazard_label = HazardLabel::random;
  bool disable_links = false;

  void validate(const Network& net) const;
};

HazardSpec read_hazard_spec(const std::string& path);

// Reproduce mode returns the listed zones verbatim; randomized mode samples
// impairment_scale distinct zones without replacement, proportionally to
// zone_weights (uniform when absent). Seed-reproducible.
std::vector<std::string> select_impaired_zones(const HazardSpec& spec, const Network& net);

struct EvacueeEstimate {
  std::map<std::string, std::int64_t> node_counts;
  std::vector<std::string> warnings;  // zones skipped for having no origin nodes
};

// Splits each impaired zone's population over its origin nodes: everyone
// gets population/n rounded down and the remainder goes one-each to the
// lowest node_ids, so zone totals are conserved exactly.
EvacueeEstimate estimate_evacuees(const std::vector<std::string>& zones, const Network& net);

struct ScenarioReport {
  std::vector<std::string> warnings;
  // node_id -> whether at least one shelter is reachable on the effective
  // (possibly link-disabled) network.
  std::map<std::string, bool> shelter_reachable;
  bool feasible = true;  // every demand node can reach a shelter
};

struct BuildResult {
  Scenario scenario;
  ScenarioReport report;
};

// Zone selection + evacuee estimation + fleet placement. Buses default to
// their link's end node as initial destination. With spec.disable_links,
// links whose both endpoints lie in impaired zones are listed in
// scenario.disabled_links and excluded from the feasibility check.
BuildResult build_scenario(const HazardSpec& spec, const Network& net,
                           std::vector<BusPlacement> fleet);

// Scenario file I/O (JSON: impaired zones, demands, fleet, label, seed).
void write_scenario_json(const std::string& path, const Scenario& scenario);
Scenario read_scenario_json(const std::string& path);

// Node table with the scenario's demands in the demand column, for replay
// through the ordinary network loader.
void write_scenario_nodes_csv(const std::string& path, const Scenario& scenario,
                              const Network& net);

}  // namespace evac

#endif  // EVAC_SCENARIO_HPP_
