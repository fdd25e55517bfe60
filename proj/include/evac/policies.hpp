#ifndef EVAC_POLICIES_HPP_
#define EVAC_POLICIES_HPP_

#include <memory>
#include <string>
#include <vector>

#include "evac/network.hpp"
#include "evac/rng.hpp"
#include "evac/simulator.hpp"

namespace evac {

using MaskSet = std::vector<std::vector<NodeIndex>>;  // per-bus action masks

MaskSet masks_for(const SimState& state, const Network& net);

// Benchmark dispatch strategies. The stochastic ones draw per bus from a
// fixed candidate list; the rule-based ones are pure functions of the state.

// Uniform over every origin and shelter node, regardless of remaining
// demand or capacity.
ActionSet stochastic_all(const SimState& state, const Network& net, const MaskSet& masks,
                         Rng& rng);

// Uniform over demand-positive origins and capacity-positive shelters; a
// bus holds when that set is empty.
ActionSet stochastic_feasible(const SimState& state, const Network& net, const MaskSet& masks,
                              Rng& rng);

// Nearest assignment: buses with spare seats chase the nearest demand;
// full buses (or loaded buses once demand is exhausted) head for the
// nearest shelter with room.
ActionSet rule_nearest(const SimState& state, const Network& net, const MaskSet& masks);

// Highest-demand assignment: buses with spare seats target the node with
// the most waiting evacuees (ties: nearest, then lowest node_id); full or
// stranded-loaded buses behave as in rule_nearest.
ActionSet rule_demand(const SimState& state, const Network& net, const MaskSet& masks);

// Dispatch rules of the shortest-path controller: full -> nearest shelter
// with capacity; otherwise -> nearest node with demand (Dijkstra); no
// demand but passengers aboard -> nearest shelter with capacity.
ActionSet greedy_controller(const SimState& state, const Network& net, const MaskSet& masks);

// Uniform interface used by the CLI and experiment runner.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual ActionSet decide(const SimState& state, const Network& net, const MaskSet& masks,
                           Rng& rng) = 0;
};

// Builds one of pi1 | pi2 | rule1 | rule2 | greedy. Throws UsageError for
// unknown names (the PPO policy is constructed from a checkpoint instead).
std::unique_ptr<Policy> make_baseline_policy(const std::string& name);

const std::vector<std::string>& baseline_policy_names();

}  // namespace evac

#endif  // EVAC_POLICIES_HPP_
