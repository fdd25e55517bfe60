#include "evac/env.hpp"

#include <algorithm>

#include "evac/errors.hpp"

namespace evac {

std::vector<double> observation_scale(const SimState& state, const Network& net,
                                      const SimConfig& config) {
  (void)config;
  const ObservationLayout layout =
      ObservationLayout::make(net, static_cast<int>(state.buses.size()));
  const double people = 1.0 / static_cast<double>(std::max<std::int64_t>(
                                  1, state.total_initial_demand));
  const double time = 1.0 / 60.0;
  std::vector<double> scale;
  scale.reserve(layout.length);
  const int u = static_cast<int>(layout.universe.size());
  for (int b = 0; b < layout.num_buses; ++b) {
    scale.push_back(people);  // capacity
    scale.push_back(people);  // onboard
    scale.push_back(time);    // time_to_arrive
    for (int i = 0; i < u; ++i) scale.push_back(1.0);
  }
  for (int i = 0; i < u; ++i) {
    scale.push_back(people);  // remaining demand
    scale.push_back(people);  // remaining capacity
    scale.push_back(1.0);     // epc flag
  }
  scale.push_back(1.0);  // clock is already normalized
  return scale;
}

namespace {

std::vector<double> scaled_observation(const SimState& state, const Network& net,
                                       const SimConfig& config,
                                       const std::vector<double>& scale) {
  std::vector<double> obs = observe(state, net, config);
  for (std::size_t i = 0; i < obs.size(); ++i) obs[i] *= scale[i];
  return obs;
}

}  // namespace

ActionSet decode_slots(const SimState& state, const Network& net, const ObservationLayout& layout,
                       const std::vector<int>& slots) {
  if (slots.size() != state.buses.size()) {
    throw ContractError("decode_slots: one slot per bus required");
  }
  const int hold_slot = static_cast<int>(layout.universe.size());
  ActionSet actions;
  actions.destination.reserve(slots.size());
  for (std::size_t b = 0; b < slots.size(); ++b) {
    const int s = slots[b];
    if (s < 0 || s > hold_slot) throw ContractError("decode_slots: slot out of range");
    actions.destination.push_back(s == hold_slot ? state.buses[b].next_node(net)
                                                 : layout.universe[s]);
  }
  return actions;
}

std::vector<std::vector<std::uint8_t>> make_slot_masks(const SimState& state, const Network& net,
                                                       const ObservationLayout& layout) {
  (void)net;
  std::vector<std::vector<std::uint8_t>> masks(state.buses.size());
  for (auto& m : masks) {
    m.assign(layout.universe.size() + 1, 0);
    for (std::size_t i = 0; i < layout.universe.size(); ++i) {
      const NodeIndex n = layout.universe[i];
      if (state.node_demand[n] > 0 || state.shelter_remaining[n] > 0) m[i] = 1;
    }
    m.back() = 1;  // hold is always available
  }
  return masks;
}

ScenarioEnv::ScenarioEnv(const Network& net, Scenario scenario, SimConfig config)
    : net_(&net), scenario_(std::move(scenario)), config_(config) {
  state_ = evac::reset(*net_, scenario_, config_, 0);
  layout_ = ObservationLayout::make(*net_, static_cast<int>(state_.buses.size()));
  obs_scale_ = observation_scale(state_, *net_, config_);
  reward_scale_ = 1.0 / (static_cast<double>(std::max<std::int64_t>(1, state_.total_initial_demand)) *
                         config_.delta_t.minutes());
}

std::vector<double> ScenarioEnv::reset(std::uint64_t episode_seed) {
  state_ = evac::reset(*net_, scenario_, config_, episode_seed);
  return scaled_observation(state_, *net_, config_, obs_scale_);
}

Env::StepResult ScenarioEnv::step(const std::vector<int>& slots) {
  const ActionSet actions = decode_slots(state_, *net_, layout_, slots);
  const StepOutcome out = evac::step(state_, actions, *net_, config_);
  return {scaled_observation(state_, *net_, config_, obs_scale_), out.reward, out.done};
}

std::vector<std::vector<std::uint8_t>> ScenarioEnv::slot_masks() const {
  return make_slot_masks(state_, *net_, layout_);
}

PoolEnv::PoolEnv(std::vector<std::shared_ptr<const Network>> nets, std::vector<Scenario> scenarios,
                 SimConfig config)
    : nets_(std::move(nets)), scenarios_(std::move(scenarios)), config_(config) {
  if (nets_.empty() || nets_.size() != scenarios_.size()) {
    throw ContractError("PoolEnv: need matching networks and scenarios");
  }
  layout_ = ObservationLayout::make(
      *nets_[0], static_cast<int>(scenarios_[0].bus_placements.size()));
  for (std::size_t i = 1; i < nets_.size(); ++i) {
    const ObservationLayout other = ObservationLayout::make(
        *nets_[i], static_cast<int>(scenarios_[i].bus_placements.size()));
    if (other.hash != layout_.hash) {
      throw ContractError("PoolEnv: all episodes must share one observation layout");
    }
  }
  reset(0);
}

std::vector<double> PoolEnv::reset(std::uint64_t episode_seed) {
  current_ = static_cast<std::size_t>(episode_seed % nets_.size());
  state_ = evac::reset(*nets_[current_], scenarios_[current_], config_, episode_seed);
  obs_scale_ = observation_scale(state_, *nets_[current_], config_);
  reward_scale_ =
      1.0 / (static_cast<double>(std::max<std::int64_t>(1, state_.total_initial_demand)) *
             config_.delta_t.minutes());
  return scaled_observation(state_, *nets_[current_], config_, obs_scale_);
}

Env::StepResult PoolEnv::step(const std::vector<int>& slots) {
  const ActionSet actions = decode_slots(state_, *nets_[current_], layout_, slots);
  const StepOutcome out = evac::step(state_, actions, *nets_[current_], config_);
  return {scaled_observation(state_, *nets_[current_], config_, obs_scale_), out.reward, out.done};
}

std::vector<std::vector<std::uint8_t>> PoolEnv::slot_masks() const {
  return make_slot_masks(state_, *nets_[current_], layout_);
}

}  // namespace evac
