#ifndef EVAC_TESTS_SUPPORT_SYNTH_HPP_
#define EVAC_TESTS_SUPPORT_SYNTH_HPP_

#include <cstdint>
#include <memory>

#include "evac/network.hpp"
#include "evac/scenario_types.hpp"

namespace evac::testsupport {

// Seeded random evacuation instances with a fixed shape, so that every
// generated network shares one observation layout.
struct SynthConfig {
  int num_origins = 6;
  int num_shelters = 3;
  int num_transit = 11;
  int num_zones = 4;      // zones hold origins only; first num_epc_zones are EPC
  int num_epc_zones = 2;
  int num_buses = 3;
  int bus_capacity = 20;
  int min_demand = 5;
  int max_demand = 25;
  double capacity_slack = 1.3;
  // Place EPC-zone origins on the far side of the map from the shelters, so
  // time-greedy dispatch underserves them.
  bool epc_far = true;
};

struct SynthInstance {
  std::shared_ptr<const Network> net;
  Scenario scenario;
};

SynthInstance make_synthetic(std::uint64_t seed, const SynthConfig& cfg = {});

}  // namespace evac::testsupport

#endif  // EVAC_TESTS_SUPPORT_SYNTH_HPP_
