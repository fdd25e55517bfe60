#ifndef EVAC_PPO_HPP_
#define EVAC_PPO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evac/env.hpp"
#include "evac/mlp.hpp"
#include "evac/policies.hpp"
#include "evac/rng.hpp"

namespace evac::ppo {

struct PpoConfig {
  double gamma = 0.99;
  double clip_epsilon = 0.2;
  double gae_lambda = 0.95;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double learning_rate = 3e-4;
  int rollout_steps = 2048;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  int total_updates = 300;
  std::uint64_t seed = 0;
  int hidden_units = 64;
  bool normalize_advantages = true;
  bool scale_rewards = true;
  // Stop when the mean episode reward has not improved by more than
  // plateau_tolerance (relative) for plateau_patience updates.
  bool early_stop = false;
  int plateau_patience = 50;
  double plateau_tolerance = 0.01;

  void validate() const;  // throws ContractError on out-of-range fields
};

// Policy / value parameters: a shared two-layer tanh trunk, one categorical
// head per bus over the candidate slots, and a scalar value head.
struct PolicyParams {
  int obs_dim = 0;
  int hidden = 0;
  int num_buses = 0;
  int num_slots = 0;  // universe size + hold
  std::uint64_t layout_hash = 0;

  Linear trunk1, trunk2, policy_head, value_head;

  // Xavier trunk, zero heads: the initial policy is uniform over each mask.
  static PolicyParams init(const ObservationLayout& layout, int hidden, Rng& rng);

  bool finite() const;
  std::size_t parameter_count() const;
};

// Categorical distribution over action slots with invalid slots fixed at
// probability zero.
struct MaskedCategorical {
  std::vector<double> probs;

  int sample(Rng& rng) const;
  int argmax() const;  // lowest index wins ties
  double log_prob(int slot) const;
  double entropy_nats() const;
};

MaskedCategorical masked_softmax(const double* logits, const std::uint8_t* mask, int n);

struct ForwardResult {
  std::vector<MaskedCategorical> bus_dists;
  double value = 0.0;
};

// Runs the network on one (scaled) observation. Throws ContractError on a
// shape mismatch.
ForwardResult forward(const PolicyParams& params, const std::vector<double>& obs,
                      const std::vector<std::vector<std::uint8_t>>& slot_masks);

// ---- Objective pieces ------------------------------------------------------

// Backward-recursion advantages; values must hold one bootstrap entry more
// than rewards (terminal steps bootstrap with 0).
std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double gamma, double lambda);

// min(ratio * adv, clip(ratio, 1-eps, 1+eps) * adv).
double clipped_objective(double ratio, double advantage, double epsilon);

// Mean squared error between predicted values and returns.
double value_loss(const std::vector<double>& values, const std::vector<double>& returns);

// clip_term - c1 * value_term + c2 * entropy_term; the trainer ascends this.
double total_loss(double clip_term, double value_term, double entropy_term, double c1, double c2);

// Shannon entropy in nats of a probability vector (zero entries are
// ignored; they are masked-out slots).
double entropy(const std::vector<double>& probs);

// ---- Training --------------------------------------------------------------

struct TrainLogRow {
  int update = 0;
  double mean_episode_reward = 0.0;  // raw, over episodes finished so far
  double clip_term = 0.0;
  double value_term = 0.0;
  double entropy_term = 0.0;
  double total = 0.0;
};

struct TrainResult {
  PolicyParams params;
  std::vector<TrainLogRow> log;
  std::int64_t update_count = 0;
};

// §-style loop: collect a rollout with the current policy, estimate
// advantages, and take clipped-surrogate ascent steps. Seed-reproducible;
// throws NumericError with a diagnostic when the loss turns non-finite.
TrainResult train(Env& env, PolicyParams init, const PpoConfig& config);

// Greedy (argmax) episode with the given parameters; returns the raw
// cumulative reward and whether the evacuation completed.
struct RolloutSummary {
  double total_reward = 0.0;
  bool completed = false;
  double total_passenger_time = 0.0;
  double weighted_abs_r_pb = 0.0;  // sum |r_pb| * T over steps
  double cost_weight = 0.0;        // sum T
};
RolloutSummary greedy_rollout(Env& env, const PolicyParams& params, std::uint64_t episode_seed);

// ---- Checkpoints -----------------------------------------------------------

struct Checkpoint {
  PolicyParams params;
  PpoConfig config;
  std::int64_t update_count = 0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Rejects checkpoints whose observation layout differs from the env's.
void require_layout_match(const Checkpoint& ckpt, const ObservationLayout& layout);

// Policy adapter so a checkpoint can drive the ordinary episode runner.
class PpoPolicy : public Policy {
 public:
  PpoPolicy(PolicyParams params, SimConfig config, bool greedy = true)
      : params_(std::move(params)), config_(config), greedy_(greedy) {}

  std::string name() const override { return "ppo"; }
  ActionSet decide(const SimState& state, const Network& net, const MaskSet& masks,
                   Rng& rng) override;

 private:
  PolicyParams params_;
  SimConfig config_;
  bool greedy_;
};

}  // namespace evac::ppo

#endif  // EVAC_PPO_HPP_
