#include "evac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "evac/csv.hpp"
#include "evac/errors.hpp"

namespace evac {

namespace {

// FNV-1a, used to fingerprint observation layouts.
std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void replan(Bus& bus, const Network& net) {
  bus.planned_path.clear();
  const NodeIndex start = bus.next_node(net);
  if (start == bus.destination) return;
  const ShortestPathTree tree = dijkstra(net, start);
  if (!tree.reachable(bus.destination)) return;  // bus will rest at `start`
  NodeIndex cur = bus.destination;
  while (cur != start) {
    const LinkIndex li = tree.parent_link[cur];
    bus.planned_path.push_back(li);
    cur = net.links()[li].from;
  }
  std::reverse(bus.planned_path.begin(), bus.planned_path.end());
}

// Seats a loaded fleet may still claim at a shelter once every bus already
// heading there has dropped its passengers.
std::int64_t uncommitted_capacity(const SimState& state, NodeIndex shelter) {
  std::int64_t free = state.shelter_remaining[shelter];
  for (const Bus& b : state.buses) {
    if (b.destination == shelter) free -= b.onboard;
  }
  return free;
}

void alight(SimState& state, const Network& net, Bus& bus, std::int64_t now_tenths) {
  const NodeIndex node = bus.at_node;
  std::int64_t k = std::min<std::int64_t>(bus.onboard, state.shelter_remaining[node]);
  if (k <= 0) return;
  bus.onboard -= static_cast<int>(k);
  state.shelter_remaining[node] -= k;
  state.evacuated += k;
  while (k > 0) {
    Cohort& c = bus.cohorts.front();
    const std::int64_t m = std::min(c.count, k);
    state.trips.push_back({bus.bus_id, net.nodes()[c.origin].node_id, net.nodes()[node].node_id,
                           Duration::from_tenths(now_tenths - c.board_tenths),
                           Duration::from_tenths(c.board_tenths), m});
    c.count -= m;
    k -= m;
    if (c.count == 0) bus.cohorts.pop_front();
  }
}

}  // namespace

std::int64_t SimState::total_waiting() const {
  return std::accumulate(node_demand.begin(), node_demand.end(), std::int64_t{0});
}

std::int64_t SimState::total_onboard() const {
  std::int64_t sum = 0;
  for (const Bus& b : buses) sum += b.onboard;
  return sum;
}

SimState reset(const Network& net, const Scenario& scenario, const SimConfig& config,
               std::uint64_t seed) {
  if (config.delta_t.tenths() <= 0) throw ContractError("SimConfig.delta_t must be positive");
  if (config.max_steps <= 0) throw ContractError("SimConfig.max_steps must be positive");

  SimState state;
  state.seed = seed;
  state.node_demand.assign(net.nodes().size(), 0);
  state.shelter_remaining.assign(net.nodes().size(), 0);
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    if (net.nodes()[i].type == NodeType::shelter) {
      state.shelter_remaining[i] = net.nodes()[i].capacity;
    }
  }

  for (const auto& [node_id, demand] : scenario.origin_demands) {
    const auto idx = net.find_node(node_id);
    if (!idx) throw ReferentialError("scenario demand references unknown node '" + node_id + "'");
    if (demand < 0) throw ValueError("scenario demand for '" + node_id + "' is negative");
    if (demand > 0 && net.nodes()[*idx].type != NodeType::origin) {
      throw ValueError("scenario places demand on non-origin node '" + node_id + "'");
    }
    state.node_demand[*idx] = demand;
  }

  std::vector<BusPlacement> placements = scenario.bus_placements;
  std::sort(placements.begin(), placements.end(),
            [](const BusPlacement& a, const BusPlacement& b) { return a.bus_id < b.bus_id; });
  for (const BusPlacement& p : placements) {
    const auto li = net.find_link(p.link_id);
    if (!li) {
      throw ReferentialError("bus '" + p.bus_id + "' placed on unknown link " +
                             std::to_string(p.link_id));
    }
    const Link& link = net.links()[*li];
    if (p.time_to_travel.tenths() < 0 || p.time_to_travel > link.travel_time) {
      throw ValueError("bus '" + p.bus_id + "': time_to_travel exceeds link travel_time");
    }
    if (p.capacity <= 0) throw ValueError("bus '" + p.bus_id + "': capacity must be positive");
    if (p.onboard < 0 || p.onboard > p.capacity) {
      throw ValueError("bus '" + p.bus_id + "': onboard out of range");
    }

    Bus bus;
    bus.bus_id = p.bus_id;
    bus.capacity = p.capacity;
    bus.onboard = p.onboard;
    if (p.time_to_travel.tenths() == 0) {
      bus.at_node = link.to;  // already at the link's end node
    } else {
      bus.link = *li;
      bus.time_to_arrive = p.time_to_travel;
      bus.at_node = -1;
    }
    bus.destination =
        p.destination.empty() ? link.to : net.node_or_throw(p.destination);
    if (p.onboard > 0) bus.cohorts.push_back({link.from, 0, p.onboard});
    replan(bus, net);
    state.buses.push_back(std::move(bus));
  }

  state.total_initial_demand = state.total_waiting() + state.total_onboard();
  return state;
}

std::vector<NodeIndex> action_mask(const SimState& state, const Network& net, int bus) {
  if (bus < 0 || bus >= static_cast<int>(state.buses.size())) {
    throw ContractError("action_mask: no such bus");
  }
  std::vector<NodeIndex> mask;
  const NodeIndex hold = state.buses[bus].next_node(net);
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(net.nodes().size()); ++i) {
    if (state.node_demand[i] > 0 || state.shelter_remaining[i] > 0 || i == hold) {
      mask.push_back(i);
    }
  }
  return mask;
}

bool is_legal_destination(const SimState& state, const Network& net, int bus, NodeIndex dest) {
  if (dest < 0 || dest >= static_cast<NodeIndex>(net.nodes().size())) return false;
  const NodeType t = net.nodes()[dest].type;
  return t == NodeType::origin || t == NodeType::shelter ||
         dest == state.buses[bus].next_node(net);
}

ZoneDemandSnapshot zone_demand_snapshot(const SimState& state, const Network& net) {
  ZoneDemandSnapshot snap;
  snap.demand.reserve(net.zones().size());
  snap.epc_flag.reserve(net.zones().size());
  for (const Zone& z : net.zones()) {
    std::int64_t total = 0;
    for (const NodeIndex n : z.member_nodes) total += state.node_demand[n];
    snap.demand.push_back(static_cast<double>(total));
    snap.epc_flag.push_back(z.epc_flag);
  }
  return snap;
}

StepOutcome step(SimState& state, const ActionSet& actions, const Network& net,
                 const SimConfig& config) {
  const std::size_t nbus = state.buses.size();
  if (actions.destination.size() != nbus) {
    throw ContractError("step: actions must cover every bus");
  }

  // 1. Destination assignment; paths recompute only on change, and a new
  //    destination takes effect at the next node for buses mid-link.
  for (std::size_t i = 0; i < nbus; ++i) {
    const NodeIndex dest = actions.destination[i];
    if (!is_legal_destination(state, net, static_cast<int>(i), dest)) {
      throw ContractError("step: bus '" + state.buses[i].bus_id +
                          "' assigned an invalid destination");
    }
    if (dest != state.buses[i].destination) {
      state.buses[i].destination = dest;
      replan(state.buses[i], net);
    }
  }

  // 2. Boarding/alighting pass for resting buses, in bus_id order. Boarding
  //    respects the seats still unclaimed at the assigned destination
  //    shelter, so buses never pick up passengers they cannot deliver under
  //    current commitments.
  for (Bus& bus : state.buses) {
    if (bus.link) continue;
    const NodeIndex node = bus.at_node;
    if (net.nodes()[node].type == NodeType::shelter && bus.destination == node) {
      alight(state, net, bus, state.clock_tenths);
    }
    if (state.node_demand[node] > 0 && bus.onboard < bus.capacity) {
      std::int64_t limit = bus.capacity - bus.onboard;
      if (net.nodes()[bus.destination].type == NodeType::shelter) {
        limit = std::min(limit, std::max<std::int64_t>(0, uncommitted_capacity(state, bus.destination)));
      }
      const std::int64_t k = std::min(limit, state.node_demand[node]);
      if (k > 0) {
        state.node_demand[node] -= k;
        bus.onboard += static_cast<int>(k);
        bus.cohorts.push_back({node, state.clock_tenths, k});
      }
    }
  }

  // 3. Price the interval. The demand side is now fixed until the next
  //    decision point, so the point-biserial snapshot and the EPC waiting
  //    rate are taken here.
  double r_pb = 0.0;
  if (!net.zones().empty()) {
    r_pb = point_biserial(zone_demand_snapshot(state, net));
  }
  std::int64_t epc_waiting = 0;
  for (const Zone& z : net.zones()) {
    if (!z.epc_flag) continue;
    for (const NodeIndex n : z.member_nodes) epc_waiting += state.node_demand[n];
  }

  // 4. Departures.
  for (Bus& bus : state.buses) {
    if (!bus.link && !bus.planned_path.empty()) {
      bus.link = bus.planned_path.front();
      bus.planned_path.erase(bus.planned_path.begin());
      bus.time_to_arrive = net.links()[*bus.link].travel_time;
      bus.at_node = -1;
    }
  }

  // 5. Movement in tenth-of-a-minute substeps. Every evacuee not yet
  //    delivered costs one tenth per substep; alightings stop the meter at
  //    their exact arrival time.
  std::int64_t step_cost_tenths = 0;
  for (std::int64_t sub = 0; sub < config.delta_t.tenths(); ++sub) {
    step_cost_tenths += state.total_initial_demand - state.evacuated;
    const std::int64_t now = state.clock_tenths + sub + 1;
    for (Bus& bus : state.buses) {
      if (!bus.link) continue;
      bus.time_to_arrive -= Duration::from_tenths(1);
      if (bus.time_to_arrive.tenths() > 0) continue;
      const NodeIndex node = net.links()[*bus.link].to;
      if (!bus.planned_path.empty()) {
        // Passing through: roll straight onto the next link.
        bus.link = bus.planned_path.front();
        bus.planned_path.erase(bus.planned_path.begin());
        bus.time_to_arrive = net.links()[*bus.link].travel_time;
      } else {
        bus.link.reset();
        bus.at_node = node;
        bus.time_to_arrive = Duration::from_tenths(0);
        if (net.nodes()[node].type == NodeType::shelter && bus.destination == node) {
          alight(state, net, bus, now);
        }
      }
    }
  }

  state.clock_tenths += config.delta_t.tenths();
  state.steps += 1;
  state.passenger_time_tenths += step_cost_tenths;

  const double step_cost = static_cast<double>(step_cost_tenths) / 10.0;
  double penalty = 0.0;
  if (config.equity_enabled) {
    if (config.penalty_mode == PenaltyMode::point_biserial) {
      penalty = std::abs(r_pb) * step_cost;
    } else {
      penalty = static_cast<double>(epc_waiting * config.delta_t.tenths()) / 10.0;
    }
  }
  state.penalty_total += penalty;
  state.equity_weight_sum += std::abs(r_pb) * step_cost;

  StepOutcome out;
  out.step_cost = step_cost;
  out.penalty = penalty;
  out.r_pb = r_pb;
  out.reward = -(step_cost + penalty);
  out.done = state.evacuation_complete() ||
             state.clock_tenths >= static_cast<std::int64_t>(config.max_steps) * config.delta_t.tenths();
  return out;
}

std::optional<NodeIndex> nearest_with_demand(const Network& net, const SimState& state,
                                             NodeIndex from) {
  const ShortestPathTree tree = dijkstra(net, from);
  std::optional<NodeIndex> best;
  std::int64_t best_dist = 0;
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(net.nodes().size()); ++i) {
    if (state.node_demand[i] <= 0 || !tree.reachable(i)) continue;
    if (!best || tree.dist_tenths[i] < best_dist) {
      best = i;
      best_dist = tree.dist_tenths[i];
    }
  }
  return best;
}

std::optional<NodeIndex> nearest_with_capacity(const Network& net, const SimState& state,
                                               NodeIndex from) {
  const ShortestPathTree tree = dijkstra(net, from);
  std::optional<NodeIndex> best;
  std::int64_t best_dist = 0;
  for (NodeIndex i = 0; i < static_cast<NodeIndex>(net.nodes().size()); ++i) {
    if (net.nodes()[i].type != NodeType::shelter || state.shelter_remaining[i] <= 0 ||
        !tree.reachable(i)) {
      continue;
    }
    if (!best || tree.dist_tenths[i] < best_dist) {
      best = i;
      best_dist = tree.dist_tenths[i];
    }
  }
  return best;
}

std::optional<std::string> nearest_with_demand(const Network& net, const SimState& state,
                                               const std::string& from) {
  const auto idx = nearest_with_demand(net, state, net.node_or_throw(from));
  if (!idx) return std::nullopt;
  return net.nodes()[*idx].node_id;
}

std::optional<std::string> nearest_with_capacity(const Network& net, const SimState& state,
                                                 const std::string& from) {
  const auto idx = nearest_with_capacity(net, state, net.node_or_throw(from));
  if (!idx) return std::nullopt;
  return net.nodes()[*idx].node_id;
}

ObservationLayout ObservationLayout::make(const Network& net, int num_buses) {
  ObservationLayout layout;
  layout.universe = net.candidate_universe();
  layout.num_buses = num_buses;
  const int u = static_cast<int>(layout.universe.size());
  layout.length = num_buses * (3 + u) + u * 3 + 1;
  std::string key = "buses=" + std::to_string(num_buses) + ";universe=";
  for (const NodeIndex n : layout.universe) key += net.nodes()[n].node_id + ",";
  layout.hash = fnv1a(key);
  return layout;
}

std::vector<double> observe(const SimState& state, const Network& net, const SimConfig& config) {
  const ObservationLayout layout =
      ObservationLayout::make(net, static_cast<int>(state.buses.size()));
  std::vector<double> obs;
  obs.reserve(layout.length);
  for (const Bus& bus : state.buses) {
    obs.push_back(static_cast<double>(bus.capacity));
    obs.push_back(static_cast<double>(bus.onboard));
    obs.push_back(bus.time_to_arrive.minutes());
    for (const NodeIndex n : layout.universe) {
      obs.push_back(bus.destination == n ? 1.0 : 0.0);
    }
  }
  for (const NodeIndex n : layout.universe) {
    obs.push_back(static_cast<double>(state.node_demand[n]));
    obs.push_back(static_cast<double>(state.shelter_remaining[n]));
    obs.push_back(static_cast<double>(net.nodes()[n].inequity_index));
  }
  const double horizon =
      static_cast<double>(config.max_steps) * static_cast<double>(config.delta_t.tenths());
  obs.push_back(static_cast<double>(state.clock_tenths) / horizon);
  return obs;
}

Scenario scenario_from_network(const Network& net, std::vector<BusPlacement> placements) {
  Scenario s;
  s.bus_placements = std::move(placements);
  std::set<std::string> zones;
  for (const Node& n : net.nodes()) {
    if (n.type == NodeType::origin && n.demand > 0) {
      s.origin_demands[n.node_id] = n.demand;
      if (!n.zone_id.empty()) zones.insert(n.zone_id);
    }
  }
  s.impaired_zones.assign(zones.begin(), zones.end());
  return s;
}

std::vector<BusPlacement> read_bus_placements_csv(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_bus = t.column("bus_id");
  const std::size_t c_link = t.column("link_id");
  const std::size_t c_ttt = t.column("time_to_travel");
  const std::size_t c_cap = t.column("capacity");
  const std::size_t c_dest = t.column("destination");
  const std::size_t c_onboard = t.find_column("onboard");

  std::vector<BusPlacement> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    BusPlacement p;
    p.bus_id = t.rows[r][c_bus];
    p.link_id = csv::to_int(t, r, c_link);
    p.time_to_travel = Duration::parse(t.rows[r][c_ttt]);
    p.capacity = static_cast<int>(csv::to_int(t, r, c_cap));
    p.destination = t.rows[r][c_dest];
    if (c_onboard != csv::Table::npos) p.onboard = static_cast<int>(csv::to_int(t, r, c_onboard));
    out.push_back(std::move(p));
  }
  return out;
}

void write_bus_placements_csv(const std::string& path, const Network& net,
                              const std::vector<BusPlacement>& placements) {
  std::vector<std::vector<std::string>> rows;
  for (const BusPlacement& p : placements) {
    const auto li = net.find_link(p.link_id);
    if (!li) throw ReferentialError("placement references unknown link " + std::to_string(p.link_id));
    const Link& l = net.links()[*li];
    const std::string dest = p.destination.empty() ? net.nodes()[l.to].node_id : p.destination;
    rows.push_back({p.bus_id, std::to_string(p.link_id), net.nodes()[l.from].node_id,
                    net.nodes()[l.to].node_id, p.time_to_travel.to_string(),
                    std::to_string(p.capacity), dest});
  }
  csv::write_file(path,
                  {"bus_id", "link_id", "from_node_id", "to_node_id", "time_to_travel",
                   "capacity", "destination"},
                  rows);
}

EpisodeTrace replay(const Network& net, const Scenario& scenario, const SimConfig& config,
                    const ReplayScript& script) {
  SimState state = reset(net, scenario, config, 0);
  for (const auto& [bus_id, _] : script.legs) {
    const bool known = std::any_of(state.buses.begin(), state.buses.end(),
                                   [&](const Bus& b) { return b.bus_id == bus_id; });
    if (!known) throw DataError("replay script references unknown bus '" + bus_id + "'");
  }

  std::vector<std::size_t> next_leg(state.buses.size(), 0);
  EpisodeTrace trace;
  bool done = state.evacuation_complete();

  while (!done) {
    ActionSet actions;
    actions.destination.resize(state.buses.size());
    for (std::size_t i = 0; i < state.buses.size(); ++i) {
      const Bus& bus = state.buses[i];
      NodeIndex dest = bus.destination;
      // A leg is consumed each time the bus has finished its previous
      // assignment and rests at it.
      if (!bus.link && bus.at_node == bus.destination) {
        const auto it = script.legs.find(bus.bus_id);
        if (it != script.legs.end() && next_leg[i] < it->second.size()) {
          const std::string& target = it->second[next_leg[i]];
          const auto target_idx = net.find_node(target);
          if (!target_idx ||
              !is_legal_destination(state, net, static_cast<int>(i), *target_idx)) {
            throw DataError("replay script: bus '" + bus.bus_id + "' leg " +
                            std::to_string(next_leg[i] + 1) + " (step " +
                            std::to_string(state.steps + 1) + "): invalid destination '" +
                            target + "'");
          }
          dest = *target_idx;
          ++next_leg[i];
        }
      }
      actions.destination[i] = dest;
    }

    const StepOutcome out = step(state, actions, net, config);
    TraceStep ts;
    ts.step = state.steps;
    ts.clock_minutes = state.clock().minutes();
    ts.reward = out.reward;
    for (const Bus& bus : state.buses) {
      ts.buses.push_back({bus.bus_id, bus.capacity, bus.onboard,
                          net.nodes()[bus.destination].node_id});
    }
    trace.steps.push_back(std::move(ts));
    trace.total_reward += out.reward;
    done = out.done;
  }

  trace.trips = state.trips;
  std::stable_sort(trace.trips.begin(), trace.trips.end(),
                   [](const TripRecord& a, const TripRecord& b) {
                     if (a.bus_id != b.bus_id) return a.bus_id < b.bus_id;
                     return a.waiting_time < b.waiting_time;
                   });
  trace.total_passenger_time = static_cast<double>(state.passenger_time_tenths) / 10.0;
  trace.total_penalty = state.penalty_total;
  trace.evacuated = state.evacuated;
  trace.completed = state.evacuation_complete();
  return trace;
}

ReplayScript read_replay_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open replay script '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("replay script '" + path + "': " + e.what());
  }
  ReplayScript script;
  if (!j.contains("legs") || !j["legs"].is_object()) {
    throw DataError("replay script '" + path + "': expected top-level object key 'legs'");
  }
  for (const auto& [bus, arr] : j["legs"].items()) {
    std::vector<std::string> legs;
    for (const auto& v : arr) legs.push_back(v.get<std::string>());
    script.legs[bus] = std::move(legs);
  }
  return script;
}

void write_trace_jsonl(const std::string& path, const EpisodeTrace& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace '" + path + "'");
  for (const TraceStep& ts : trace.steps) {
    nlohmann::json j;
    j["step"] = ts.step;
    j["clock"] = ts.clock_minutes;
    j["reward"] = ts.reward;
    j["buses"] = nlohmann::json::array();
    for (const auto& b : ts.buses) {
      j["buses"].push_back({{"bus_id", b.bus_id},
                            {"capacity", b.capacity},
                            {"onboard", b.onboard},
                            {"destination", b.destination}});
    }
    out << j.dump() << "\n";
  }
}

EpisodeTrace read_trace_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace '" + path + "'");
  EpisodeTrace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("trace '" + path + "': " + e.what());
    }
    TraceStep ts;
    ts.step = j.at("step").get<std::int64_t>();
    ts.clock_minutes = j.at("clock").get<double>();
    ts.reward = j.at("reward").get<double>();
    for (const auto& b : j.at("buses")) {
      ts.buses.push_back({b.at("bus_id").get<std::string>(), b.at("capacity").get<int>(),
                          b.at("onboard").get<int>(), b.at("destination").get<std::string>()});
    }
    trace.total_reward += ts.reward;
    trace.steps.push_back(std::move(ts));
  }
  return trace;
}

void write_trips_csv(const std::string& path, const std::vector<TripRecord>& trips) {
  std::vector<std::vector<std::string>> rows;
  for (const TripRecord& t : trips) {
    rows.push_back({t.bus_id, t.origin, t.destination, t.trip_time.to_string(),
                    t.waiting_time.to_string(), std::to_string(t.passengers)});
  }
  csv::write_file(path, {"bus_id", "origin", "destination", "trip_time", "waiting_time",
                         "passengers"},
                  rows);
}

std::vector<TripRecord> read_trips_csv(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const std::size_t c_bus = t.column("bus_id");
  const std::size_t c_origin = t.column("origin");
  const std::size_t c_dest = t.column("destination");
  const std::size_t c_trip = t.column("trip_time");
  const std::size_t c_wait = t.column("waiting_time");
  const std::size_t c_pax = t.column("passengers");
  std::vector<TripRecord> trips;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    trips.push_back({t.rows[r][c_bus], t.rows[r][c_origin], t.rows[r][c_dest],
                     Duration::parse(t.rows[r][c_trip]), Duration::parse(t.rows[r][c_wait]),
                     csv::to_int(t, r, c_pax)});
  }
  return trips;
}

bool verify_trace(const Network& net, const Scenario& scenario, const SimConfig& config,
                  const EpisodeTrace& trace) {
  SimState state = reset(net, scenario, config, 0);
  for (const TraceStep& ts : trace.steps) {
    if (ts.buses.size() != state.buses.size()) return false;
    ActionSet actions;
    actions.destination.resize(state.buses.size());
    for (std::size_t i = 0; i < state.buses.size(); ++i) {
      if (ts.buses[i].bus_id != state.buses[i].bus_id) return false;
      const auto dest = net.find_node(ts.buses[i].destination);
      if (!dest) return false;
      actions.destination[i] = *dest;
    }
    const StepOutcome out = step(state, actions, net, config);
    if (std::abs(out.reward - ts.reward) > 1e-9) return false;
    for (std::size_t i = 0; i < state.buses.size(); ++i) {
      if (state.buses[i].onboard != ts.buses[i].onboard) return false;
      if (state.buses[i].capacity != ts.buses[i].capacity) return false;
    }
  }
  return true;
}

}  // namespace evac
