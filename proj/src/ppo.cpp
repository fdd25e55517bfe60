#include "evac/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "evac/errors.hpp"

namespace evac::ppo {

void PpoConfig::validate() const {
  if (gamma < 0.0 || gamma >= 1.0) throw ContractError("gamma must be in [0, 1)");
  if (clip_epsilon <= 0.0) throw ContractError("clip_epsilon must be positive");
  if (gae_lambda < 0.0 || gae_lambda > 1.0) throw ContractError("gae_lambda must be in [0, 1]");
  if (value_coef < 0.0) throw ContractError("value_coef must be >= 0");
  if (entropy_coef < 0.0) throw ContractError("entropy_coef must be >= 0");
  if (learning_rate <= 0.0) throw ContractError("learning_rate must be positive");
  if (rollout_steps <= 0) throw ContractError("rollout_steps must be positive");
  if (epochs_per_update <= 0) throw ContractError("epochs_per_update must be positive");
  if (minibatch_size <= 0) throw ContractError("minibatch_size must be positive");
  if (total_updates < 0) throw ContractError("total_updates must be >= 0");
  if (hidden_units <= 0) throw ContractError("hidden_units must be positive");
}

PolicyParams PolicyParams::init(const ObservationLayout& layout, int hidden, Rng& rng) {
  PolicyParams p;
  p.obs_dim = layout.length;
  p.hidden = hidden;
  p.num_buses = layout.num_buses;
  p.num_slots = layout.slots_per_bus();
  p.layout_hash = layout.hash;
  p.trunk1 = Linear::xavier(p.obs_dim, hidden, rng);
  p.trunk2 = Linear::xavier(hidden, hidden, rng);
  p.policy_head = Linear::zeros(hidden, p.num_buses * p.num_slots);
  p.value_head = Linear::zeros(hidden, 1);
  return p;
}

bool PolicyParams::finite() const {
  const auto ok = [](const Linear& l) {
    for (const double v : l.w) if (!std::isfinite(v)) return false;
    for (const double v : l.b) if (!std::isfinite(v)) return false;
    return true;
  };
  return ok(trunk1) && ok(trunk2) && ok(policy_head) && ok(value_head);
}

std::size_t PolicyParams::parameter_count() const {
  return trunk1.parameter_count() + trunk2.parameter_count() + policy_head.parameter_count() +
         value_head.parameter_count();
}

int MaskedCategorical::sample(Rng& rng) const {
  const double u = rng.uniform01();
  double acc = 0.0;
  int last_valid = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_valid = static_cast<int>(i);
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return last_valid;
}

int MaskedCategorical::argmax() const {
  int best = 0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > best_p) {
      best_p = probs[i];
      best = static_cast<int>(i);
    }
  }
  return best;
}

double MaskedCategorical::log_prob(int slot) const {
  const double p = probs[slot];
  if (p <= 0.0) throw ContractError("log_prob of a masked-out slot");
  return std::log(p);
}

double MaskedCategorical::entropy_nats() const { return ppo::entropy(probs); }

MaskedCategorical masked_softmax(const double* logits, const std::uint8_t* mask, int n) {
  MaskedCategorical dist;
  dist.probs.assign(n, 0.0);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (mask[i] && logits[i] > max_logit) max_logit = logits[i];
  }
  if (max_logit == -std::numeric_limits<double>::infinity()) {
    throw ContractError("masked_softmax: empty mask");
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      dist.probs[i] = std::exp(logits[i] - max_logit);
      sum += dist.probs[i];
    }
  }
  for (int i = 0; i < n; ++i) dist.probs[i] /= sum;
  return dist;
}

namespace {

struct ForwardCache {
  std::vector<double> h1, h2, logits;
  double value = 0.0;
};

void forward_cached(const PolicyParams& p, const std::vector<double>& obs, ForwardCache& cache) {
  if (static_cast<int>(obs.size()) != p.obs_dim) {
    throw ContractError("forward: observation length mismatch");
  }
  cache.h1.assign(p.hidden, 0.0);
  cache.h2.assign(p.hidden, 0.0);
  cache.logits.assign(static_cast<std::size_t>(p.num_buses) * p.num_slots, 0.0);
  p.trunk1.forward(obs.data(), cache.h1.data());
  tanh_inplace(cache.h1);
  p.trunk2.forward(cache.h1.data(), cache.h2.data());
  tanh_inplace(cache.h2);
  p.policy_head.forward(cache.h2.data(), cache.logits.data());
  double v = 0.0;
  p.value_head.forward(cache.h2.data(), &v);
  cache.value = v;
}

std::vector<MaskedCategorical> distributions(const PolicyParams& p, const ForwardCache& cache,
                                             const std::vector<std::vector<std::uint8_t>>& masks) {
  if (static_cast<int>(masks.size()) != p.num_buses) {
    throw ContractError("forward: one mask per bus required");
  }
  std::vector<MaskedCategorical> dists;
  dists.reserve(p.num_buses);
  for (int b = 0; b < p.num_buses; ++b) {
    if (static_cast<int>(masks[b].size()) != p.num_slots) {
      throw ContractError("forward: mask width mismatch");
    }
    dists.push_back(masked_softmax(cache.logits.data() + static_cast<std::size_t>(b) * p.num_slots,
                                   masks[b].data(), p.num_slots));
  }
  return dists;
}

struct ParamGrads {
  LinearGrad trunk1, trunk2, policy_head, value_head;

  explicit ParamGrads(const PolicyParams& p)
      : trunk1(p.trunk1), trunk2(p.trunk2), policy_head(p.policy_head), value_head(p.value_head) {}

  void zero() {
    trunk1.zero();
    trunk2.zero();
    policy_head.zero();
    value_head.zero();
  }
};

// Reverse pass for one sample. dlogits/dvalue are gradients of the ascent
// objective w.r.t. network outputs.
void backward_sample(const PolicyParams& p, const std::vector<double>& obs,
                     const ForwardCache& cache, const std::vector<double>& dlogits,
                     double dvalue, ParamGrads& grads) {
  std::vector<double> dh2(p.hidden, 0.0);
  grads.policy_head.backward(p.policy_head, cache.h2.data(), dlogits.data(), 1.0, dh2.data());
  grads.value_head.backward(p.value_head, cache.h2.data(), &dvalue, 1.0, dh2.data());

  for (int i = 0; i < p.hidden; ++i) dh2[i] *= 1.0 - cache.h2[i] * cache.h2[i];
  std::vector<double> dh1(p.hidden, 0.0);
  grads.trunk2.backward(p.trunk2, cache.h1.data(), dh2.data(), 1.0, dh1.data());

  for (int i = 0; i < p.hidden; ++i) dh1[i] *= 1.0 - cache.h1[i] * cache.h1[i];
  grads.trunk1.backward(p.trunk1, obs.data(), dh1.data(), 1.0, nullptr);
}

}  // namespace

ForwardResult forward(const PolicyParams& params, const std::vector<double>& obs,
                      const std::vector<std::vector<std::uint8_t>>& slot_masks) {
  ForwardCache cache;
  forward_cached(params, obs, cache);
  ForwardResult out;
  out.bus_dists = distributions(params, cache, slot_masks);
  out.value = cache.value;
  return out;
}

std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double gamma, double lambda) {
  if (values.size() != rewards.size() + 1) {
    throw ContractError("gae: values must hold exactly one bootstrap entry more than rewards");
  }
  std::vector<double> adv(rewards.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    const double delta = rewards[i] + gamma * values[i + 1] - values[i];
    running = delta + gamma * lambda * running;
    adv[i] = running;
  }
  return adv;
}

double clipped_objective(double ratio, double advantage, double epsilon) {
  if (epsilon <= 0.0) throw ContractError("clipped_objective: epsilon must be positive");
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double value_loss(const std::vector<double>& values, const std::vector<double>& returns) {
  if (values.size() != returns.size()) throw ContractError("value_loss: length mismatch");
  if (values.empty()) throw ContractError("value_loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - returns[i];
    acc += d * d;
  }
  return acc / static_cast<double>(values.size());
}

double total_loss(double clip_term, double value_term, double entropy_term, double c1, double c2) {
  return clip_term - c1 * value_term + c2 * entropy_term;
}

double entropy(const std::vector<double>& probs) {
  double sum = 0.0;
  double h = 0.0;
  for (const double p : probs) {
    if (p < 0.0) throw ContractError("entropy: negative probability");
    if (p > 0.0) h -= p * std::log(p);
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ContractError("entropy: probabilities must sum to 1");
  return h;
}

namespace {

struct Rollout {
  std::vector<std::vector<double>> obs;
  std::vector<std::vector<std::vector<std::uint8_t>>> masks;
  std::vector<std::vector<int>> slots;
  std::vector<double> logp_old;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> done;
};

std::vector<double> masked_gae(const Rollout& roll, double bootstrap, double gamma,
                               double lambda) {
  const std::size_t n = roll.rewards.size();
  std::vector<double> adv(n, 0.0);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double nonterminal = roll.done[i] ? 0.0 : 1.0;
    const double next_value = (i + 1 == n) ? bootstrap : roll.values[i + 1];
    const double delta = roll.rewards[i] + gamma * next_value * nonterminal - roll.values[i];
    running = delta + gamma * lambda * nonterminal * running;
    adv[i] = running;
  }
  return adv;
}

}  // namespace

TrainResult train(Env& env, PolicyParams init, const PpoConfig& config) {
  config.validate();
  const ObservationLayout& layout = env.layout();
  if (init.layout_hash != layout.hash) {
    throw ContractError("train: policy parameters built for a different observation layout");
  }

  TrainResult result;
  result.params = std::move(init);
  PolicyParams& params = result.params;

  Rng rng(config.seed);
  Adam adam(config.learning_rate);
  std::uint64_t episode_counter = 0;
  std::vector<double> obs = env.reset(episode_counter++);
  double episode_reward = 0.0;
  std::vector<double> finished_episodes;

  double best_mean = -std::numeric_limits<double>::infinity();
  int best_update = 0;

  const int minibatch = std::min(config.minibatch_size, config.rollout_steps);

  for (int update = 1; update <= config.total_updates; ++update) {
    Rollout roll;
    roll.obs.reserve(config.rollout_steps);
    for (int t = 0; t < config.rollout_steps; ++t) {
      auto masks = env.slot_masks();
      ForwardCache cache;
      forward_cached(params, obs, cache);
      const auto dists = distributions(params, cache, masks);

      std::vector<int> slots(dists.size());
      double logp = 0.0;
      for (std::size_t b = 0; b < dists.size(); ++b) {
        slots[b] = dists[b].sample(rng);
        logp += dists[b].log_prob(slots[b]);
      }

      const Env::StepResult sr = env.step(slots);
      const double scale = config.scale_rewards ? env.reward_scale() : 1.0;

      roll.obs.push_back(obs);
      roll.masks.push_back(std::move(masks));
      roll.slots.push_back(std::move(slots));
      roll.logp_old.push_back(logp);
      roll.rewards.push_back(sr.reward * scale);
      roll.values.push_back(cache.value);
      roll.done.push_back(sr.done ? 1 : 0);

      episode_reward += sr.reward;
      if (sr.done) {
        finished_episodes.push_back(episode_reward);
        episode_reward = 0.0;
        obs = env.reset(episode_counter++);
      } else {
        obs = sr.obs;
      }
    }

    ForwardCache boot_cache;
    forward_cached(params, obs, boot_cache);
    std::vector<double> advantages =
        masked_gae(roll, boot_cache.value, config.gamma, config.gae_lambda);
    std::vector<double> returns(advantages.size());
    for (std::size_t i = 0; i < advantages.size(); ++i) returns[i] = advantages[i] + roll.values[i];

    if (config.normalize_advantages) {
      double mean = 0.0;
      for (const double a : advantages) mean += a;
      mean /= static_cast<double>(advantages.size());
      double var = 0.0;
      for (const double a : advantages) var += (a - mean) * (a - mean);
      var /= static_cast<double>(advantages.size());
      const double sd = std::sqrt(var) + 1e-8;
      for (double& a : advantages) a = (a - mean) / sd;
    }

    std::vector<std::size_t> order(roll.rewards.size());
    std::iota(order.begin(), order.end(), 0);

    double log_clip = 0.0, log_vf = 0.0, log_ent = 0.0;
    std::size_t log_batches = 0;

    ParamGrads grads(params);
    for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
      // Fisher-Yates with the run's own RNG keeps epochs reproducible.
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
      }

      for (std::size_t start = 0; start < order.size(); start += minibatch) {
        const std::size_t end = std::min(order.size(), start + minibatch);
        const double inv_m = 1.0 / static_cast<double>(end - start);
        grads.zero();
        double clip_acc = 0.0, vf_acc = 0.0, ent_acc = 0.0;

        for (std::size_t k = start; k < end; ++k) {
          const std::size_t idx = order[k];
          ForwardCache cache;
          forward_cached(params, roll.obs[idx], cache);
          const auto dists = distributions(params, cache, roll.masks[idx]);

          double logp_new = 0.0;
          double ent = 0.0;
          for (std::size_t b = 0; b < dists.size(); ++b) {
            logp_new += dists[b].log_prob(roll.slots[idx][b]);
            ent += dists[b].entropy_nats();
          }
          const double ratio = std::exp(logp_new - roll.logp_old[idx]);
          const double adv = advantages[idx];
          const double unclipped = ratio * adv;
          const double clipped =
              std::clamp(ratio, 1.0 - config.clip_epsilon, 1.0 + config.clip_epsilon) * adv;
          const double surrogate = std::min(unclipped, clipped);
          const double verr = cache.value - returns[idx];

          clip_acc += surrogate;
          vf_acc += verr * verr;
          ent_acc += ent;

          // d(objective)/dlogp flows only through the unclipped branch.
          const double dsurr_dlogp = (unclipped <= clipped) ? unclipped : 0.0;

          std::vector<double> dlogits(cache.logits.size(), 0.0);
          for (std::size_t b = 0; b < dists.size(); ++b) {
            const auto& probs = dists[b].probs;
            const double ent_b = dists[b].entropy_nats();
            double* dl = dlogits.data() + b * probs.size();
            for (std::size_t j = 0; j < probs.size(); ++j) {
              const double p = probs[j];
              if (p <= 0.0) continue;
              const double indicator = (static_cast<int>(j) == roll.slots[idx][b]) ? 1.0 : 0.0;
              double g = dsurr_dlogp * (indicator - p);
              g += config.entropy_coef * (-p * (std::log(p) + ent_b));
              dl[j] = g * inv_m;
            }
          }
          const double dvalue = -config.value_coef * 2.0 * verr * inv_m;
          backward_sample(params, roll.obs[idx], cache, dlogits, dvalue, grads);
        }

        const double batch_clip = clip_acc * inv_m;
        const double batch_vf = vf_acc * inv_m;
        const double batch_ent = ent_acc * inv_m;
        const double objective =
            total_loss(batch_clip, batch_vf, batch_ent, config.value_coef, config.entropy_coef);
        if (!std::isfinite(objective)) {
          throw NumericError("ppo: non-finite loss at update " + std::to_string(update) +
                             " (clip=" + std::to_string(batch_clip) +
                             ", vf=" + std::to_string(batch_vf) +
                             ", entropy=" + std::to_string(batch_ent) + ")");
        }
        log_clip += batch_clip;
        log_vf += batch_vf;
        log_ent += batch_ent;
        ++log_batches;

        adam.begin_step();
        adam.ascend(params.trunk1, grads.trunk1);
        adam.ascend(params.trunk2, grads.trunk2);
        adam.ascend(params.policy_head, grads.policy_head);
        adam.ascend(params.value_head, grads.value_head);
      }
    }

    if (!params.finite()) {
      throw NumericError("ppo: non-finite parameters after update " + std::to_string(update));
    }

    TrainLogRow row;
    row.update = update;
    const std::size_t window = std::min<std::size_t>(finished_episodes.size(), 20);
    if (window > 0) {
      double m = 0.0;
      for (std::size_t i = finished_episodes.size() - window; i < finished_episodes.size(); ++i) {
        m += finished_episodes[i];
      }
      row.mean_episode_reward = m / static_cast<double>(window);
    }
    row.clip_term = log_clip / static_cast<double>(log_batches);
    row.value_term = log_vf / static_cast<double>(log_batches);
    row.entropy_term = log_ent / static_cast<double>(log_batches);
    row.total = total_loss(row.clip_term, row.value_term, row.entropy_term, config.value_coef,
                           config.entropy_coef);
    result.log.push_back(row);
    result.update_count = update;

    if (config.early_stop && window > 0) {
      const double rel =
          (row.mean_episode_reward - best_mean) / std::max(1.0, std::abs(best_mean));
      if (rel > config.plateau_tolerance) {
        best_mean = row.mean_episode_reward;
        best_update = update;
      } else if (update - best_update >= config.plateau_patience) {
        break;
      }
    }
  }

  return result;
}

RolloutSummary greedy_rollout(Env& env, const PolicyParams& params, std::uint64_t episode_seed) {
  std::vector<double> obs = env.reset(episode_seed);
  RolloutSummary summary;
  bool done = env.state().evacuation_complete();
  while (!done) {
    const ForwardResult fwd = forward(params, obs, env.slot_masks());
    std::vector<int> slots(fwd.bus_dists.size());
    for (std::size_t b = 0; b < slots.size(); ++b) slots[b] = fwd.bus_dists[b].argmax();
    const Env::StepResult sr = env.step(slots);
    summary.total_reward += sr.reward;
    obs = sr.obs;
    done = sr.done;
  }
  const SimState& st = env.state();
  summary.completed = st.evacuation_complete();
  summary.total_passenger_time = static_cast<double>(st.passenger_time_tenths) / 10.0;
  summary.weighted_abs_r_pb = st.equity_weight_sum;
  summary.cost_weight = summary.total_passenger_time;
  return summary;
}

namespace {

std::string hash_to_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t hex_to_hash(const std::string& s) {
  return std::strtoull(s.c_str(), nullptr, 16);
}

nlohmann::json layer_to_json(const Linear& l) {
  return {{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}};
}

Linear layer_from_json(const nlohmann::json& j) {
  Linear l;
  l.in = j.at("in").get<int>();
  l.out = j.at("out").get<int>();
  l.w = j.at("w").get<std::vector<double>>();
  l.b = j.at("b").get<std::vector<double>>();
  if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
      l.b.size() != static_cast<std::size_t>(l.out)) {
    throw DataError("checkpoint: layer shape does not match its weight array");
  }
  return l;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["update_count"] = ckpt.update_count;
  j["config"] = {{"gamma", ckpt.config.gamma},
                 {"clip_epsilon", ckpt.config.clip_epsilon},
                 {"gae_lambda", ckpt.config.gae_lambda},
                 {"value_coef", ckpt.config.value_coef},
                 {"entropy_coef", ckpt.config.entropy_coef},
                 {"learning_rate", ckpt.config.learning_rate},
                 {"rollout_steps", ckpt.config.rollout_steps},
                 {"epochs_per_update", ckpt.config.epochs_per_update},
                 {"minibatch_size", ckpt.config.minibatch_size},
                 {"total_updates", ckpt.config.total_updates},
                 {"seed", ckpt.config.seed},
                 {"hidden_units", ckpt.config.hidden_units},
                 {"normalize_advantages", ckpt.config.normalize_advantages},
                 {"scale_rewards", ckpt.config.scale_rewards},
                 {"early_stop", ckpt.config.early_stop},
                 {"plateau_patience", ckpt.config.plateau_patience},
                 {"plateau_tolerance", ckpt.config.plateau_tolerance}};
  j["layout"] = {{"hash", hash_to_hex(ckpt.params.layout_hash)},
                 {"obs_dim", ckpt.params.obs_dim},
                 {"num_buses", ckpt.params.num_buses},
                 {"num_slots", ckpt.params.num_slots},
                 {"hidden", ckpt.params.hidden}};
  j["weights"] = {{"trunk1", layer_to_json(ckpt.params.trunk1)},
                  {"trunk2", layer_to_json(ckpt.params.trunk2)},
                  {"policy_head", layer_to_json(ckpt.params.policy_head)},
                  {"value_head", layer_to_json(ckpt.params.value_head)}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint '" + path + "': " + e.what());
  }
  if (j.value("format_version", 0) != 1) {
    throw DataError("checkpoint '" + path + "': unsupported format_version");
  }
  Checkpoint ckpt;
  ckpt.update_count = j.at("update_count").get<std::int64_t>();
  const auto& c = j.at("config");
  ckpt.config.gamma = c.at("gamma").get<double>();
  ckpt.config.clip_epsilon = c.at("clip_epsilon").get<double>();
  ckpt.config.gae_lambda = c.at("gae_lambda").get<double>();
  ckpt.config.value_coef = c.at("value_coef").get<double>();
  ckpt.config.entropy_coef = c.at("entropy_coef").get<double>();
  ckpt.config.learning_rate = c.at("learning_rate").get<double>();
  ckpt.config.rollout_steps = c.at("rollout_steps").get<int>();
  ckpt.config.epochs_per_update = c.at("epochs_per_update").get<int>();
  ckpt.config.minibatch_size = c.at("minibatch_size").get<int>();
  ckpt.config.total_updates = c.at("total_updates").get<int>();
  ckpt.config.seed = c.at("seed").get<std::uint64_t>();
  ckpt.config.hidden_units = c.at("hidden_units").get<int>();
  ckpt.config.normalize_advantages = c.at("normalize_advantages").get<bool>();
  ckpt.config.scale_rewards = c.at("scale_rewards").get<bool>();
  ckpt.config.early_stop = c.at("early_stop").get<bool>();
  ckpt.config.plateau_patience = c.at("plateau_patience").get<int>();
  ckpt.config.plateau_tolerance = c.at("plateau_tolerance").get<double>();

  const auto& lay = j.at("layout");
  ckpt.params.layout_hash = hex_to_hash(lay.at("hash").get<std::string>());
  ckpt.params.obs_dim = lay.at("obs_dim").get<int>();
  ckpt.params.num_buses = lay.at("num_buses").get<int>();
  ckpt.params.num_slots = lay.at("num_slots").get<int>();
  ckpt.params.hidden = lay.at("hidden").get<int>();

  const auto& w = j.at("weights");
  ckpt.params.trunk1 = layer_from_json(w.at("trunk1"));
  ckpt.params.trunk2 = layer_from_json(w.at("trunk2"));
  ckpt.params.policy_head = layer_from_json(w.at("policy_head"));
  ckpt.params.value_head = layer_from_json(w.at("value_head"));
  if (!ckpt.params.finite()) throw DataError("checkpoint '" + path + "': non-finite weights");
  return ckpt;
}

void require_layout_match(const Checkpoint& ckpt, const ObservationLayout& layout) {
  if (ckpt.params.layout_hash != layout.hash) {
    throw DataError("checkpoint was trained for a different observation layout (hash " +
                    hash_to_hex(ckpt.params.layout_hash) + " vs " + hash_to_hex(layout.hash) +
                    ")");
  }
}

ActionSet PpoPolicy::decide(const SimState& state, const Network& net, const MaskSet&, Rng& rng) {
  const ObservationLayout layout =
      ObservationLayout::make(net, static_cast<int>(state.buses.size()));
  require_layout_match(Checkpoint{params_, {}, 0}, layout);

  std::vector<double> obs = observe(state, net, config_);
  const std::vector<double> scale = observation_scale(state, net, config_);
  for (std::size_t i = 0; i < obs.size(); ++i) obs[i] *= scale[i];

  const auto slot_masks = make_slot_masks(state, net, layout);
  const ForwardResult fwd = forward(params_, obs, slot_masks);
  std::vector<int> slots(fwd.bus_dists.size());
  for (std::size_t b = 0; b < slots.size(); ++b) {
    slots[b] = greedy_ ? fwd.bus_dists[b].argmax() : fwd.bus_dists[b].sample(rng);
  }
  return decode_slots(state, net, layout, slots);
}

}  // namespace evac::ppo
