#ifndef EVAC_SCENARIO_TYPES_HPP_
#define EVAC_SCENARIO_TYPES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evac/duration.hpp"

namespace evac {

enum class HazardLabel { wildfire, landslide, flood, earthquake, random };

HazardLabel parse_hazard_label(const std::string& label);
std::string hazard_label_name(HazardLabel label);

// One fleet row: a bus resting on a link, time_to_travel minutes away from
// the link's end node.
struct BusPlacement {
  std::string bus_id;
  std::int64_t link_id = 0;
  Duration time_to_travel;
  int capacity = 0;
  int onboard = 0;
  std::string destination;  // defaults to the link's to_node when empty
};

// Everything an episode starts from: which zones are impaired, how many
// evacuees wait at each origin node, and where the fleet is.
struct Scenario {
  std::vector<std::string> impaired_zones;
  std::map<std::string, std::int64_t> origin_demands;  // node_id -> evacuees
  std::vector<BusPlacement> bus_placements;
  HazardLabel hazard_label = HazardLabel::random;
  std::vector<std::int64_t> disabled_links;
  std::uint64_t seed = 0;
};

}  // namespace evac

#endif  // EVAC_SCENARIO_TYPES_HPP_
