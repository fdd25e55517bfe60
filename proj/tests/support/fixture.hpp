#ifndef EVAC_TESTS_SUPPORT_FIXTURE_HPP_
#define EVAC_TESTS_SUPPORT_FIXTURE_HPP_

#include <string>

#include "evac/network.hpp"
#include "evac/simulator.hpp"

namespace evac::testsupport {

inline std::string fixture_path(const std::string& rel) {
  return std::string(EVAC_FIXTURE_DIR) + "/" + rel;
}

inline Network load_six_node() {
  return load_network(fixture_path("six_node/nodes.csv"), fixture_path("six_node/links.csv"),
                      fixture_path("six_node/zones.csv"));
}

inline Scenario six_node_scenario(const Network& net) {
  return scenario_from_network(
      net, read_bus_placements_csv(fixture_path("six_node/buses.csv")));
}

}  // namespace evac::testsupport

#endif  // EVAC_TESTS_SUPPORT_FIXTURE_HPP_
