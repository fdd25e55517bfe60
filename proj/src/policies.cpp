#include "evac/policies.hpp"

#include <algorithm>

#include "evac/errors.hpp"

namespace evac {

namespace {

std::vector<NodeIndex> all_candidates(const Network& net) {
  return net.candidate_universe();
}

std::vector<NodeIndex> feasible_candidates(const SimState& state, const Network& net) {
  std::vector<NodeIndex> out;
  for (const NodeIndex n : net.candidate_universe()) {
    if (state.node_demand[n] > 0 || state.shelter_remaining[n] > 0) out.push_back(n);
  }
  return out;
}

bool any_demand(const SimState& state) { return state.total_waiting() > 0; }

// Shared body of the two rule-based strategies and the greedy controller.
// pick_demand_target chooses where a bus with spare seats goes.
template <typename PickDemandTarget>
ActionSet rule_based(const SimState& state, const Network& net, PickDemandTarget pick) {
  ActionSet actions;
  actions.destination.reserve(state.buses.size());
  for (const Bus& bus : state.buses) {
    const NodeIndex ref = bus.next_node(net);
    NodeIndex dest = ref;  // hold unless a rule fires
    const bool full = bus.onboard >= bus.capacity;
    if (full) {
      if (const auto shelter = nearest_with_capacity(net, state, ref)) dest = *shelter;
    } else if (any_demand(state)) {
      if (const auto target = pick(ref)) {
        dest = *target;
      } else if (bus.onboard > 0) {
        if (const auto shelter = nearest_with_capacity(net, state, ref)) dest = *shelter;
      }
    } else if (bus.onboard > 0) {
      if (const auto shelter = nearest_with_capacity(net, state, ref)) dest = *shelter;
    }
    actions.destination.push_back(dest);
  }
  return actions;
}

}  // namespace

MaskSet masks_for(const SimState& state, const Network& net) {
  MaskSet masks;
  masks.reserve(state.buses.size());
  for (int i = 0; i < static_cast<int>(state.buses.size()); ++i) {
    masks.push_back(action_mask(state, net, i));
  }
  return masks;
}

ActionSet stochastic_all(const SimState& state, const Network& net, const MaskSet&, Rng& rng) {
  const std::vector<NodeIndex> candidates = all_candidates(net);
  ActionSet actions;
  for (const Bus& bus : state.buses) {
    if (candidates.empty()) {
      actions.destination.push_back(bus.next_node(net));
    } else {
      actions.destination.push_back(candidates[rng.below(candidates.size())]);
    }
  }
  return actions;
}

ActionSet stochastic_feasible(const SimState& state, const Network& net, const MaskSet&,
                              Rng& rng) {
  const std::vector<NodeIndex> candidates = feasible_candidates(state, net);
  ActionSet actions;
  for (const Bus& bus : state.buses) {
    if (candidates.empty()) {
      actions.destination.push_back(bus.next_node(net));
    } else {
      actions.destination.push_back(candidates[rng.below(candidates.size())]);
    }
  }
  return actions;
}

ActionSet rule_nearest(const SimState& state, const Network& net, const MaskSet&) {
  return rule_based(state, net, [&](NodeIndex ref) {
    return nearest_with_demand(net, state, ref);
  });
}

ActionSet rule_demand(const SimState& state, const Network& net, const MaskSet&) {
  return rule_based(state, net, [&](NodeIndex ref) -> std::optional<NodeIndex> {
    std::int64_t best_demand = 0;
    std::vector<NodeIndex> leaders;
    for (NodeIndex i = 0; i < static_cast<NodeIndex>(net.nodes().size()); ++i) {
      if (state.node_demand[i] > best_demand) {
        best_demand = state.node_demand[i];
        leaders.assign(1, i);
      } else if (state.node_demand[i] == best_demand && best_demand > 0) {
        leaders.push_back(i);
      }
    }
    if (leaders.empty()) return std::nullopt;
    if (leaders.size() == 1) return leaders[0];
    // Ties: nearest wins, then lowest node_id (= lowest index).
    const ShortestPathTree tree = dijkstra(net, ref);
    std::optional<NodeIndex> best;
    std::int64_t best_dist = 0;
    for (const NodeIndex n : leaders) {
      if (!tree.reachable(n)) continue;
      if (!best || tree.dist_tenths[n] < best_dist) {
        best = n;
        best_dist = tree.dist_tenths[n];
      }
    }
    if (!best) return leaders[0];
    return best;
  });
}

ActionSet greedy_controller(const SimState& state, const Network& net, const MaskSet& masks) {
  return rule_nearest(state, net, masks);
}

namespace {

class StochasticAllPolicy : public Policy {
 public:
  std::string name() const override { return "pi1"; }
  ActionSet decide(const SimState& s, const Network& n, const MaskSet& m, Rng& rng) override {
    return stochastic_all(s, n, m, rng);
  }
};

class StochasticFeasiblePolicy : public Policy {
 public:
  std::string name() const override { return "pi2"; }
  ActionSet decide(const SimState& s, const Network& n, const MaskSet& m, Rng& rng) override {
    return stochastic_feasible(s, n, m, rng);
  }
};

class RuleNearestPolicy : public Policy {
 public:
  std::string name() const override { return "rule1"; }
  ActionSet decide(const SimState& s, const Network& n, const MaskSet& m, Rng&) override {
    return rule_nearest(s, n, m);
  }
};

class RuleDemandPolicy : public Policy {
 public:
  std::string name() const override { return "rule2"; }
  ActionSet decide(const SimState& s, const Network& n, const MaskSet& m, Rng&) override {
    return rule_demand(s, n, m);
  }
};

class GreedyPolicy : public Policy {
 public:
  std::string name() const override { return "greedy"; }
  ActionSet decide(const SimState& s, const Network& n, const MaskSet& m, Rng&) override {
    return greedy_controller(s, n, m);
  }
};

}  // namespace

std::unique_ptr<Policy> make_baseline_policy(const std::string& name) {
  if (name == "pi1") return std::make_unique<StochasticAllPolicy>();
  if (name == "pi2") return std::make_unique<StochasticFeasiblePolicy>();
  if (name == "rule1") return std::make_unique<RuleNearestPolicy>();
  if (name == "rule2") return std::make_unique<RuleDemandPolicy>();
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  std::string valid;
  for (const auto& n : baseline_policy_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw UsageError("unknown policy '" + name + "' (valid: " + valid + ", ppo)");
}

const std::vector<std::string>& baseline_policy_names() {
  static const std::vector<std::string> names = {"pi1", "pi2", "rule1", "rule2", "greedy"};
  return names;
}

}  // namespace evac
