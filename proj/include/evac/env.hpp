#ifndef EVAC_ENV_HPP_
#define EVAC_ENV_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "evac/network.hpp"
#include "evac/scenario_types.hpp"
#include "evac/simulator.hpp"

namespace evac {

// Per-feature scaling applied to observe() before a policy network sees it.
// People counts are divided by the episode's initial demand and arrival
// countdowns by one hour, so activations stay O(1) across scenario sizes.
std::vector<double> observation_scale(const SimState& state, const Network& net,
                                      const SimConfig& config);

// Episode interface used by the PPO trainer. Actions are per-bus slots over
// the candidate universe, with one extra trailing slot meaning "hold at the
// next node".
class Env {
 public:
  struct StepResult {
    std::vector<double> obs;  // scaled
    double reward = 0.0;      // raw environment reward
    bool done = false;
  };

  virtual ~Env() = default;
  virtual const Network& network() const = 0;
  virtual const SimConfig& config() const = 0;
  virtual const ObservationLayout& layout() const = 0;
  virtual std::vector<double> reset(std::uint64_t episode_seed) = 0;
  virtual StepResult step(const std::vector<int>& slots) = 0;
  virtual std::vector<std::vector<std::uint8_t>> slot_masks() const = 0;
  virtual const SimState& state() const = 0;
  // Multiplier applied to rewards during training (raw rewards are logged).
  virtual double reward_scale() const = 0;
};

// Slot -> destination decoding and the tight slot validity masks shared by
// the env and the checkpointed policy.
ActionSet decode_slots(const SimState& state, const Network& net, const ObservationLayout& layout,
                       const std::vector<int>& slots);
std::vector<std::vector<std::uint8_t>> make_slot_masks(const SimState& state, const Network& net,
                                                       const ObservationLayout& layout);

// One fixed (network, scenario) pair per episode.
class ScenarioEnv : public Env {
 public:
  ScenarioEnv(const Network& net, Scenario scenario, SimConfig config);

  const Network& network() const override { return *net_; }
  const SimConfig& config() const override { return config_; }
  const ObservationLayout& layout() const override { return layout_; }
  std::vector<double> reset(std::uint64_t episode_seed) override;
  StepResult step(const std::vector<int>& slots) override;
  std::vector<std::vector<std::uint8_t>> slot_masks() const override;
  const SimState& state() const override { return state_; }
  double reward_scale() const override { return reward_scale_; }

 private:
  const Network* net_;
  Scenario scenario_;
  SimConfig config_;
  ObservationLayout layout_;
  SimState state_;
  std::vector<double> obs_scale_;
  double reward_scale_ = 1.0;
};

// Cycles deterministically through a pool of (network, scenario) episodes
// that share one observation layout. Used for training across a scenario
// suite.
class PoolEnv : public Env {
 public:
  PoolEnv(std::vector<std::shared_ptr<const Network>> nets, std::vector<Scenario> scenarios,
          SimConfig config);

  const Network& network() const override { return *nets_[current_]; }
  const SimConfig& config() const override { return config_; }
  const ObservationLayout& layout() const override { return layout_; }
  std::vector<double> reset(std::uint64_t episode_seed) override;
  StepResult step(const std::vector<int>& slots) override;
  std::vector<std::vector<std::uint8_t>> slot_masks() const override;
  const SimState& state() const override { return state_; }
  double reward_scale() const override { return reward_scale_; }

 private:
  std::vector<std::shared_ptr<const Network>> nets_;
  std::vector<Scenario> scenarios_;
  SimConfig config_;
  ObservationLayout layout_;
  SimState state_;
  std::size_t current_ = 0;
  std::vector<double> obs_scale_;
  double reward_scale_ = 1.0;
};

}  // namespace evac

#endif  // EVAC_ENV_HPP_
