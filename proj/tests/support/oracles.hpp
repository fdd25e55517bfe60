#ifndef EVAC_TESTS_SUPPORT_ORACLES_HPP_
#define EVAC_TESTS_SUPPORT_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "evac/duration.hpp"
#include "evac/network.hpp"
#include "evac/scenario_types.hpp"
#include "evac/simulator.hpp"

namespace evac::testsupport {

// Textbook two-pass Pearson correlation; NaN when either variance is zero.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Advantage estimates evaluated directly as the truncated double sum of
// discounted TD residuals (independent of the backward recursion).
std::vector<double> gae_direct_sum(const std::vector<double>& rewards,
                                   const std::vector<double>& values, double gamma,
                                   double lambda);

// Exhaustive simple-path enumeration; only for small graphs.
std::optional<std::int64_t> brute_shortest_tenths(const Network& net, NodeIndex from,
                                                  NodeIndex to);

// Uniform-cost search over the exact environment dynamics, branching over
// every per-step destination choice that can influence the future (buses at
// or crossing a node get their full mask; loaded in-transit buses
// additionally branch across shelters when some bus could board this step).
// Returns the maximum achievable episode reward within the horizon.
struct SearchResult {
  double best_reward = 0.0;
  std::int64_t best_cost_tenths = 0;
  std::size_t states_expanded = 0;
};
SearchResult brute_force_optimum(const Network& net, const Scenario& scenario,
                                 const SimConfig& config, Duration horizon);

// Paired one-sided t statistic for mean(a) < mean(b); significant at
// p < 0.05 when the statistic exceeds the df=n-1 critical value.
double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b);
double t_critical_05(int df);

}  // namespace evac::testsupport

#endif  // EVAC_TESTS_SUPPORT_ORACLES_HPP_
