#ifndef EVAC_SIMULATOR_HPP_
#define EVAC_SIMULATOR_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evac/duration.hpp"
#include "evac/equity.hpp"
#include "evac/network.hpp"
#include "evac/scenario_types.hpp"

namespace evac {

// Inequity penalty added to the step cost when equity is enabled:
//   point_biserial — |r_pb(zone demand, EPC flag)| * step cost
//   epc_waiting    — waiting time accrued in EPC zones during the step
enum class PenaltyMode { point_biserial, epc_waiting };

struct SimConfig {
  Duration delta_t = Duration::from_tenths(10);  // one minute
  int max_steps = 200;
  bool equity_enabled = false;
  PenaltyMode penalty_mode = PenaltyMode::point_biserial;
};

// A boarded group that shares a pickup node and pickup time. Kept FIFO so
// partial alightings split deterministically.
struct Cohort {
  NodeIndex origin = -1;
  std::int64_t board_tenths = 0;
  std::int64_t count = 0;
};

struct Bus {
  std::string bus_id;
  int capacity = 0;
  int onboard = 0;
  NodeIndex destination = -1;
  // Either resting at a node (at_node >= 0, link empty) or moving along a
  // link with time_to_arrive left to its end node.
  std::optional<LinkIndex> link;
  Duration time_to_arrive;
  NodeIndex at_node = -1;
  std::vector<LinkIndex> planned_path;  // links to traverse after the current one
  std::deque<Cohort> cohorts;

  // The node the bus will next rest at: its position if parked, the current
  // link's end node otherwise. Also the "hold" destination.
  NodeIndex next_node(const Network& net) const {
    return link ? net.links()[*link].to : at_node;
  }
};

// One completed delivery, matching the trip-log table: the bus, where the
// passengers boarded, the shelter, in-vehicle time, pre-board waiting time
// and headcount.
struct TripRecord {
  std::string bus_id;
  std::string origin;
  std::string destination;
  Duration trip_time;
  Duration waiting_time;
  std::int64_t passengers = 0;
};

struct SimState {
  std::int64_t clock_tenths = 0;
  std::int64_t steps = 0;
  std::vector<Bus> buses;                    // sorted by bus_id
  std::vector<std::int64_t> node_demand;     // by node index
  std::vector<std::int64_t> shelter_remaining;
  std::int64_t evacuated = 0;
  std::int64_t total_initial_demand = 0;
  std::uint64_t seed = 0;

  // Cost bookkeeping. Passenger-time is held in exact integer tenths; the
  // penalty side is real-valued.
  std::int64_t passenger_time_tenths = 0;    // sum of step costs T
  double penalty_total = 0.0;                // sum of step penalties J
  double equity_weight_sum = 0.0;            // sum of |r_pb| * T (for reports)
  std::vector<TripRecord> trips;

  Duration clock() const { return Duration::from_tenths(clock_tenths); }
  double cumulative_cost() const {
    return static_cast<double>(passenger_time_tenths) / 10.0 + penalty_total;
  }
  std::int64_t total_waiting() const;
  std::int64_t total_onboard() const;
  bool evacuation_complete() const { return total_waiting() == 0 && total_onboard() == 0; }
};

struct ActionSet {
  std::vector<NodeIndex> destination;  // aligned with SimState::buses
};

struct StepOutcome {
  double reward = 0.0;   // -(T + J)
  bool done = false;
  double step_cost = 0.0;  // T, passenger-minutes
  double penalty = 0.0;    // J
  double r_pb = 0.0;       // point-biserial of the step's demand snapshot
};

// Places the fleet and demand described by the scenario onto the network.
// Throws ReferentialError when the scenario references unknown nodes/links.
SimState reset(const Network& net, const Scenario& scenario, const SimConfig& config,
               std::uint64_t seed);

// Destinations a policy may choose for a bus: nodes with remaining demand,
// shelters with remaining capacity, and the bus's own next node (hold).
// Sorted by node index; never empty.
std::vector<NodeIndex> action_mask(const SimState& state, const Network& net, int bus);

// True if dest is accepted by step() for this bus: any origin, any shelter,
// or the bus's next node. Strictly wider than action_mask so that
// assign-anywhere baselines remain expressible.
bool is_legal_destination(const SimState& state, const Network& net, int bus, NodeIndex dest);

// Advances the world by delta_t: reassigns destinations, runs the boarding
// pass, moves buses with exact event times, and prices the interval.
StepOutcome step(SimState& state, const ActionSet& actions, const Network& net,
                 const SimConfig& config);

// Remaining demand aggregated per zone, after the current boarding pass.
ZoneDemandSnapshot zone_demand_snapshot(const SimState& state, const Network& net);

// Nearest demand-positive node / shelter with remaining capacity from a
// node, by shortest-path time; ties take the lowest node_id. nullopt when
// none is reachable.
std::optional<std::string> nearest_with_demand(const Network& net, const SimState& state,
                                               const std::string& from);
std::optional<std::string> nearest_with_capacity(const Network& net, const SimState& state,
                                                 const std::string& from);
std::optional<NodeIndex> nearest_with_demand(const Network& net, const SimState& state,
                                             NodeIndex from);
std::optional<NodeIndex> nearest_with_capacity(const Network& net, const SimState& state,
                                               NodeIndex from);

// ---- Observation encoding ----------------------------------------------

// Layout: for each bus (capacity, onboard, time_to_arrive, one-hot current
// destination over the candidate universe), then for each universe node
// (remaining demand, remaining capacity, EPC flag), then normalized clock.
// Universe = all origins and shelters in node_id order; stable across an
// experiment.
struct ObservationLayout {
  std::vector<NodeIndex> universe;
  int num_buses = 0;
  int length = 0;
  std::uint64_t hash = 0;  // guards checkpoints against layout changes

  static ObservationLayout make(const Network& net, int num_buses);
  int slots_per_bus() const { return static_cast<int>(universe.size()) + 1; }  // + hold
};

std::vector<double> observe(const SimState& state, const Network& net, const SimConfig& config);

// ---- Fleet and scenario helpers -------------------------------------------

// Scenario whose demands come straight from the network's demand column.
Scenario scenario_from_network(const Network& net, std::vector<BusPlacement> placements);

// Fleet table I/O (bus_id, link_id, from_node_id, to_node_id,
// time_to_travel, capacity, destination).
std::vector<BusPlacement> read_bus_placements_csv(const std::string& path);
void write_bus_placements_csv(const std::string& path, const Network& net,
                              const std::vector<BusPlacement>& placements);

// ---- Scripted replay -----------------------------------------------------

// Ordered per-bus destination assignments, consumed one leg per arrival.
struct ReplayScript {
  std::map<std::string, std::vector<std::string>> legs;  // bus_id -> node_ids
};

struct TraceStep {
  std::int64_t step = 0;
  double clock_minutes = 0.0;
  double reward = 0.0;
  struct BusStatus {
    std::string bus_id;
    int capacity = 0;
    int onboard = 0;
    std::string destination;
  };
  std::vector<BusStatus> buses;
};

struct EpisodeTrace {
  std::vector<TraceStep> steps;
  std::vector<TripRecord> trips;           // sorted by (bus_id, board time)
  double total_reward = 0.0;
  double total_passenger_time = 0.0;       // minutes
  double total_penalty = 0.0;
  std::int64_t evacuated = 0;
  bool completed = false;                  // all demand served within the horizon
};

// Runs the script to completion (or max_steps). Invalid legs raise
// DataError mentioning the bus and leg index.
EpisodeTrace replay(const Network& net, const Scenario& scenario, const SimConfig& config,
                    const ReplayScript& script);

ReplayScript read_replay_script(const std::string& path);

// Line-delimited trace exchange; a written trace re-ingests to an equal one.
void write_trace_jsonl(const std::string& path, const EpisodeTrace& trace);
EpisodeTrace read_trace_jsonl(const std::string& path);
void write_trips_csv(const std::string& path, const std::vector<TripRecord>& trips);
std::vector<TripRecord> read_trips_csv(const std::string& path);

// Re-drives the per-step destinations recorded in a trace and checks the
// rewards and bus statuses match. Used to audit exported traces.
bool verify_trace(const Network& net, const Scenario& scenario, const SimConfig& config,
                  const EpisodeTrace& trace);

}  // namespace evac

#endif  // EVAC_SIMULATOR_HPP_
