#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <set>
#include <unordered_map>

#include "evac/errors.hpp"

namespace evac::testsupport {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> gae_direct_sum(const std::vector<double>& rewards,
                                   const std::vector<double>& values, double gamma,
                                   double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> deltas(n);
  for (std::size_t t = 0; t < n; ++t) {
    deltas[t] = rewards[t] + gamma * values[t + 1] - values[t];
  }
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double weight = 1.0;
    for (std::size_t l = 0; t + l < n; ++l) {
      adv[t] += weight * deltas[t + l];
      weight *= gamma * lambda;
    }
  }
  return adv;
}

namespace {

void enumerate_paths(const Network& net, NodeIndex cur, NodeIndex to, std::int64_t acc,
                     std::vector<bool>& visited, std::optional<std::int64_t>& best) {
  if (cur == to) {
    if (!best || acc < *best) best = acc;
    return;
  }
  for (const LinkIndex li : net.outgoing(cur)) {
    const Link& l = net.links()[li];
    if (visited[l.to]) continue;
    visited[l.to] = true;
    enumerate_paths(net, l.to, to, acc + l.travel_time.tenths(), visited, best);
    visited[l.to] = false;
  }
}

}  // namespace

std::optional<std::int64_t> brute_shortest_tenths(const Network& net, NodeIndex from,
                                                  NodeIndex to) {
  std::optional<std::int64_t> best;
  std::vector<bool> visited(net.nodes().size(), false);
  visited[from] = true;
  enumerate_paths(net, from, to, 0, visited, best);
  return best;
}

namespace {

std::string state_key(const SimState& s) {
  std::string key;
  key.reserve(16 * (s.buses.size() + s.node_demand.size()));
  auto put = [&key](std::int64_t v) {
    char buf[sizeof v];
    std::memcpy(buf, &v, sizeof v);
    key.append(buf, sizeof v);
  };
  for (const Bus& b : s.buses) {
    put(b.link ? *b.link : -1);
    put(b.at_node);
    put(b.time_to_arrive.tenths());
    put(b.onboard);
    put(b.destination);
  }
  for (const auto d : s.node_demand) put(d);
  for (const auto r : s.shelter_remaining) put(r);
  return key;
}

std::int64_t cost_tenths(const SimState& s) {
  return s.passenger_time_tenths + static_cast<std::int64_t>(std::llround(s.penalty_total * 10.0));
}

// Per-bus destination menus covering every choice that can change the
// future from this state.
std::vector<std::vector<NodeIndex>> action_menus(const SimState& s, const Network& net,
                                                 const SimConfig& config) {
  bool someone_can_board = false;
  for (const Bus& b : s.buses) {
    if (!b.link && s.node_demand[b.at_node] > 0 && b.onboard < b.capacity) {
      someone_can_board = true;
      break;
    }
  }

  std::vector<std::vector<NodeIndex>> menus;
  for (std::size_t i = 0; i < s.buses.size(); ++i) {
    const Bus& b = s.buses[i];
    const bool resting = !b.link;
    const bool crossing = b.link && b.time_to_arrive <= config.delta_t;
    std::set<NodeIndex> menu;
    if (resting || crossing) {
      for (const NodeIndex n : action_mask(s, net, static_cast<int>(i))) menu.insert(n);
    } else {
      menu.insert(b.destination);  // keep
      if (b.onboard > 0 && someone_can_board) {
        // Destination changes re-route this bus later anyway, but they also
        // shift shelter commitments for boardings happening right now.
        menu.insert(b.next_node(net));
        for (NodeIndex n = 0; n < static_cast<NodeIndex>(net.nodes().size()); ++n) {
          if (net.nodes()[n].type == NodeType::shelter && s.shelter_remaining[n] > 0) {
            menu.insert(n);
          }
        }
      }
    }
    menus.emplace_back(menu.begin(), menu.end());
  }
  return menus;
}

}  // namespace

SearchResult brute_force_optimum(const Network& net, const Scenario& scenario,
                                 const SimConfig& config, Duration horizon) {
  SimConfig cfg = config;
  cfg.max_steps = static_cast<int>(horizon.tenths() / cfg.delta_t.tenths()) + 8;

  SearchResult result;
  SimState start = reset(net, scenario, cfg, 0);
  if (start.evacuation_complete()) {
    result.best_reward = 0.0;
    return result;
  }

  struct Entry {
    std::int64_t g;
    std::size_t idx;
    bool operator>(const Entry& o) const { return g > o.g; }
  };
  std::vector<SimState> arena;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::unordered_map<std::string, std::int64_t> best_g;

  arena.push_back(std::move(start));
  best_g[state_key(arena[0])] = 0;
  queue.push({0, 0});

  while (!queue.empty()) {
    const Entry top = queue.top();
    queue.pop();
    const SimState& state = arena[top.idx];
    if (cost_tenths(state) != top.g) continue;  // stale entry
    const auto settled = best_g.find(state_key(state));
    if (settled != best_g.end() && settled->second < top.g) continue;

    if (state.evacuation_complete()) {
      result.best_cost_tenths = top.g;
      result.best_reward = -static_cast<double>(top.g) / 10.0;
      return result;
    }
    if (state.clock_tenths >= horizon.tenths()) continue;
    ++result.states_expanded;

    const auto menus = action_menus(state, net, cfg);
    std::vector<std::size_t> pick(menus.size(), 0);
    while (true) {
      ActionSet actions;
      actions.destination.resize(menus.size());
      for (std::size_t i = 0; i < menus.size(); ++i) actions.destination[i] = menus[i][pick[i]];

      SimState next = state;
      step(next, actions, net, cfg);
      const std::int64_t g2 = cost_tenths(next);
      if (next.clock_tenths <= horizon.tenths() || next.evacuation_complete()) {
        next.trips.clear();  // irrelevant to the search, saves memory
        const std::string key = state_key(next);
        const auto it = best_g.find(key);
        if (it == best_g.end() || g2 < it->second) {
          best_g[key] = g2;
          arena.push_back(std::move(next));
          queue.push({g2, arena.size() - 1});
        }
      }

      std::size_t d = 0;
      while (d < menus.size()) {
        if (++pick[d] < menus[d].size()) break;
        pick[d] = 0;
        ++d;
      }
      if (d == menus.size()) break;
    }
  }

  throw ContractError("brute_force_optimum: no complete evacuation within the horizon");
}

double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ContractError("paired_t_statistic: need equal-length samples, n >= 2");
  }
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] - a[i];
  double mean = 0.0;
  for (const double v : d) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double v : d) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double se = std::sqrt(var / static_cast<double>(n));
  return mean / se;
}

double t_critical_05(int df) {
  static const double table[] = {6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860,
                                 1.833, 1.812, 1.796, 1.782, 1.771, 1.761, 1.753, 1.746,
                                 1.740, 1.734, 1.729, 1.725, 1.721, 1.717, 1.714, 1.711,
                                 1.708, 1.706, 1.703, 1.701, 1.699, 1.697};
  if (df >= 1 && df <= 30) return table[df - 1];
  return 1.645;
}

}  // namespace evac::testsupport
