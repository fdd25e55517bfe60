#include <algorithm>
#include <filesystem>
#include <numeric>

#include "doctest.h"

#include "evac/env.hpp"
#include "evac/errors.hpp"
#include "evac/rng.hpp"
#include "evac/simulator.hpp"
#include "support/fixture.hpp"
#include "support/synth.hpp"

using namespace evac;
using namespace evac::testsupport;

namespace {

SimConfig default_config() {
  SimConfig cfg;
  cfg.delta_t = Duration::from_minutes(1.0);
  cfg.max_steps = 200;
  return cfg;
}

ReplayScript itinerary_a() {
  ReplayScript s;
  s.legs["b1"] = {"d1", "o2", "d1"};
  s.legs["b2"] = {"o2", "d2"};
  return s;
}

ReplayScript itinerary_b() {
  ReplayScript s;
  s.legs["b1"] = {"d1", "o2", "d2"};
  s.legs["b2"] = {"o2", "d1"};
  return s;
}

void check_trip(const TripRecord& t, const char* bus, const char* origin, const char* dest,
                double trip_min, double wait_min, std::int64_t pax) {
  CHECK(t.bus_id == bus);
  CHECK(t.origin == origin);
  CHECK(t.destination == dest);
  CHECK(t.trip_time.minutes() == trip_min);
  CHECK(t.waiting_time.minutes() == wait_min);
  CHECK(t.passengers == pax);
}

}  // namespace

TEST_CASE("reset places the fleet exactly as the fleet table says") {
  const Network net = load_six_node();
  const Scenario scenario = six_node_scenario(net);
  const SimState state = reset(net, scenario, default_config(), 1);

  REQUIRE(state.buses.size() == 2);
  const Bus& b1 = state.buses[0];
  CHECK(b1.bus_id == "b1");
  REQUIRE(b1.link.has_value());
  CHECK(net.links()[*b1.link].link_id == 1);
  CHECK(b1.time_to_arrive.minutes() == 4.0);
  CHECK(net.nodes()[b1.destination].node_id == "o1");
  CHECK(b1.capacity == 20);
  CHECK(b1.onboard == 0);

  const Bus& b2 = state.buses[1];
  REQUIRE(b2.link.has_value());
  CHECK(net.links()[*b2.link].link_id == 10);
  CHECK(b2.time_to_arrive.minutes() == 5.0);
  CHECK(net.nodes()[b2.destination].node_id == "n2");

  CHECK(state.node_demand[net.node_or_throw("o1")] == 10);
  CHECK(state.node_demand[net.node_or_throw("o2")] == 30);
  CHECK(state.shelter_remaining[net.node_or_throw("d1")] == 25);
  CHECK(state.shelter_remaining[net.node_or_throw("d2")] == 15);
  CHECK(state.total_initial_demand == 40);
}

TEST_CASE("zero-demand scenario is terminal at reset") {
  const Network net = load_six_node();
  Scenario scenario = six_node_scenario(net);
  scenario.origin_demands.clear();
  const SimState state = reset(net, scenario, default_config(), 1);
  CHECK(state.evacuation_complete());
}

TEST_CASE("scenario referencing a missing link fails") {
  const Network net = load_six_node();
  Scenario scenario = six_node_scenario(net);
  scenario.bus_placements[0].link_id = 99;
  CHECK_THROWS_AS(reset(net, scenario, default_config(), 1), ReferentialError);
}

TEST_CASE("initial action mask covers demand, capacity and hold") {
  const Network net = load_six_node();
  const SimState state = reset(net, six_node_scenario(net), default_config(), 1);
  const auto mask = action_mask(state, net, 0);
  std::vector<std::string> ids;
  for (const NodeIndex n : mask) ids.push_back(net.nodes()[n].node_id);
  CHECK(ids == std::vector<std::string>{"d1", "d2", "o1", "o2"});
}

TEST_CASE("exhausted entries drop out of the mask") {
  const Network net = load_six_node();
  SimState state = reset(net, six_node_scenario(net), default_config(), 1);
  state.shelter_remaining[net.node_or_throw("d2")] = 0;
  const auto mask = action_mask(state, net, 0);
  for (const NodeIndex n : mask) CHECK(net.nodes()[n].node_id != "d2");

  // All demand gone and a bus resting at d1: only the hold action remains.
  state.node_demand.assign(state.node_demand.size(), 0);
  state.shelter_remaining.assign(state.shelter_remaining.size(), 0);
  state.buses[0].link.reset();
  state.buses[0].at_node = net.node_or_throw("d1");
  state.buses[0].destination = state.buses[0].at_node;
  const auto hold_mask = action_mask(state, net, 0);
  REQUIRE(hold_mask.size() == 1);
  CHECK(net.nodes()[hold_mask[0]].node_id == "d1");
}

TEST_CASE("first step prices every waiting evacuee") {
  const Network net = load_six_node();
  SimState state = reset(net, six_node_scenario(net), default_config(), 1);
  ActionSet keep;
  for (const Bus& b : state.buses) keep.destination.push_back(b.destination);
  const StepOutcome out = step(state, keep, net, default_config());
  CHECK(out.reward == -40.0);
  CHECK(out.step_cost == 40.0);
  CHECK_FALSE(out.done);
}

TEST_CASE("terminal state yields zero reward and done") {
  const Network net = load_six_node();
  Scenario scenario = six_node_scenario(net);
  scenario.origin_demands.clear();
  SimState state = reset(net, scenario, default_config(), 1);
  ActionSet keep;
  for (const Bus& b : state.buses) keep.destination.push_back(b.destination);
  const StepOutcome out = step(state, keep, net, default_config());
  CHECK(out.reward == 0.0);
  CHECK(out.done);
}

TEST_CASE("off-mask destination is rejected") {
  const Network net = load_six_node();
  SimState state = reset(net, six_node_scenario(net), default_config(), 1);
  ActionSet bad;
  bad.destination = {net.node_or_throw("n1"), net.node_or_throw("n2")};
  // n1 is neither origin, shelter, nor bus 1's next node.
  CHECK_THROWS_AS(step(state, bad, net, default_config()), ContractError);
}

TEST_CASE("scripted itinerary A reproduces the reference trip log") {
  const Network net = load_six_node();
  const EpisodeTrace trace = replay(net, six_node_scenario(net), default_config(), itinerary_a());

  CHECK(trace.total_passenger_time == 1270.0);
  CHECK(trace.completed);
  CHECK(trace.evacuated == 40);
  REQUIRE(trace.trips.size() == 3);
  check_trip(trace.trips[0], "b1", "o1", "d1", 15.0, 4.0, 10);
  check_trip(trace.trips[1], "b1", "o2", "d1", 10.0, 29.0, 15);
  check_trip(trace.trips[2], "b2", "o2", "d2", 20.0, 13.0, 15);
}

TEST_CASE("scripted itinerary B reproduces the reference trip log") {
  const Network net = load_six_node();
  const EpisodeTrace trace = replay(net, six_node_scenario(net), default_config(), itinerary_b());

  CHECK(trace.total_passenger_time == 1270.0);
  CHECK(trace.completed);
  REQUIRE(trace.trips.size() == 3);
  check_trip(trace.trips[0], "b1", "o1", "d1", 15.0, 4.0, 10);
  check_trip(trace.trips[1], "b1", "o2", "d2", 20.0, 29.0, 15);
  check_trip(trace.trips[2], "b2", "o2", "d1", 10.0, 13.0, 15);
}

TEST_CASE("reward equivalence: negative reward sum equals the trip-log total") {
  const Network net = load_six_node();
  const EpisodeTrace trace = replay(net, six_node_scenario(net), default_config(), itinerary_a());
  double trip_total = 0.0;
  for (const TripRecord& t : trace.trips) {
    trip_total += (t.trip_time.minutes() + t.waiting_time.minutes()) *
                  static_cast<double>(t.passengers);
  }
  CHECK(trip_total == 1270.0);
  CHECK(-trace.total_reward == doctest::Approx(trip_total).epsilon(1e-12));
}

TEST_CASE("empty script on a zero-demand scenario gives an empty trip log") {
  const Network net = load_six_node();
  Scenario scenario = six_node_scenario(net);
  scenario.origin_demands.clear();
  const EpisodeTrace trace = replay(net, scenario, default_config(), ReplayScript{});
  CHECK(trace.trips.empty());
  CHECK(trace.steps.empty());
}

TEST_CASE("invalid script step reports bus and leg") {
  const Network net = load_six_node();
  ReplayScript bad;
  bad.legs["b1"] = {"n9"};
  CHECK_THROWS_WITH_AS(replay(net, six_node_scenario(net), default_config(), bad),
                       doctest::Contains("leg 1"), DataError);

  ReplayScript unknown_bus;
  unknown_bus.legs["b9"] = {"d1"};
  CHECK_THROWS_AS(replay(net, six_node_scenario(net), default_config(), unknown_bus), DataError);
}

TEST_CASE("observation layout has the documented length and content") {
  const Network net = load_six_node();
  const SimConfig cfg = default_config();
  const SimState state = reset(net, six_node_scenario(net), cfg, 1);
  const auto obs = observe(state, net, cfg);
  // 2 buses x (3 scalars + 4 one-hot) + 4 nodes x 3 + clock.
  CHECK(obs.size() == 27);

  const ObservationLayout layout = ObservationLayout::make(net, 2);
  CHECK(layout.length == 27);
  CHECK(layout.universe.size() == 4);

  // Bus 1: capacity 20, onboard 0, tta 4, destination one-hot at o1.
  CHECK(obs[0] == 20.0);
  CHECK(obs[1] == 0.0);
  CHECK(obs[2] == 4.0);
  std::vector<double> onehot(obs.begin() + 3, obs.begin() + 7);
  CHECK(onehot == std::vector<double>{0.0, 0.0, 1.0, 0.0});  // d1,d2,o1,o2
  // Bus 2's destination n2 is outside the universe: all zeros.
  std::vector<double> onehot2(obs.begin() + 10, obs.begin() + 14);
  CHECK(onehot2 == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  // Node block: d1 then d2 then o1 then o2.
  CHECK(obs[14 + 1] == 25.0);  // d1 remaining capacity
  CHECK(obs[14 + 3 + 1] == 15.0);
  CHECK(obs[14 + 6 + 0] == 10.0);  // o1 demand
  CHECK(obs[14 + 6 + 2] == 1.0);   // o1 epc flag
  CHECK(obs[14 + 9 + 0] == 30.0);
  CHECK(obs.back() == 0.0);
}

TEST_CASE("terminal observation zeroes exhausted slots") {
  const Network net = load_six_node();
  const SimConfig cfg = default_config();
  const EpisodeTrace trace = replay(net, six_node_scenario(net), cfg, itinerary_a());
  REQUIRE(trace.completed);
  // Rebuild the final state by stepping a fresh copy along the trace.
  SimState state = reset(net, six_node_scenario(net), cfg, 0);
  for (const TraceStep& ts : trace.steps) {
    ActionSet actions;
    for (const auto& b : ts.buses) actions.destination.push_back(net.node_or_throw(b.destination));
    step(state, actions, net, cfg);
  }
  const auto obs = observe(state, net, cfg);
  CHECK(obs[14 + 6 + 0] == 0.0);  // o1 demand exhausted
  CHECK(obs[14 + 9 + 0] == 0.0);  // o2 demand exhausted
}

TEST_CASE("step is deterministic given state and actions") {
  const Network net = load_six_node();
  const SimConfig cfg = default_config();
  const SimState start = reset(net, six_node_scenario(net), cfg, 1);
  ActionSet actions;
  actions.destination = {net.node_or_throw("o1"), net.node_or_throw("o2")};

  SimState a = start, b = start;
  const StepOutcome ra = step(a, actions, net, cfg);
  const StepOutcome rb = step(b, actions, net, cfg);
  CHECK(ra.reward == rb.reward);
  CHECK(a.clock_tenths == b.clock_tenths);
  CHECK(a.node_demand == b.node_demand);
  CHECK(a.shelter_remaining == b.shelter_remaining);
  for (std::size_t i = 0; i < a.buses.size(); ++i) {
    CHECK(a.buses[i].onboard == b.buses[i].onboard);
    CHECK(a.buses[i].destination == b.buses[i].destination);
    CHECK(a.buses[i].time_to_arrive == b.buses[i].time_to_arrive);
  }
}

TEST_CASE("conservation and monotonicity hold under random legal actions") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = make_synthetic(seed);
    const Network& net = *inst.net;
    const SimConfig cfg = default_config();
    SimState state = reset(net, inst.scenario, cfg, seed);
    Rng rng(seed * 31 + 7);

    std::int64_t prev_cost = 0;
    std::vector<std::int64_t> prev_shelter = state.shelter_remaining;
    bool done = state.evacuation_complete();
    int steps = 0;
    while (!done && steps < 120) {
      ActionSet actions;
      for (int b = 0; b < static_cast<int>(state.buses.size()); ++b) {
        const auto mask = action_mask(state, net, b);
        actions.destination.push_back(mask[rng.below(mask.size())]);
      }
      const StepOutcome out = step(state, actions, net, cfg);
      ++steps;

      CHECK(state.evacuated + state.total_waiting() + state.total_onboard() ==
            state.total_initial_demand);
      CHECK(state.passenger_time_tenths >= prev_cost);
      prev_cost = state.passenger_time_tenths;
      for (std::size_t i = 0; i < prev_shelter.size(); ++i) {
        CHECK(state.shelter_remaining[i] <= prev_shelter[i]);
      }
      prev_shelter = state.shelter_remaining;
      for (const Bus& bus : state.buses) {
        CHECK(bus.onboard >= 0);
        CHECK(bus.onboard <= bus.capacity);
        if (bus.link) CHECK(bus.time_to_arrive <= net.links()[*bus.link].travel_time);
      }
      done = out.done;
      if (done) {
        CHECK((state.evacuation_complete() ||
               state.clock_tenths >= static_cast<std::int64_t>(cfg.max_steps) * cfg.delta_t.tenths()));
      }
    }
  }
}

TEST_CASE("equity penalty modes") {
  const Network net = load_six_node();
  SimConfig cfg = default_config();
  cfg.equity_enabled = true;

  SUBCASE("point-biserial mode multiplies |r| into the step cost") {
    cfg.penalty_mode = PenaltyMode::point_biserial;
    SimState state = reset(net, six_node_scenario(net), cfg, 1);
    ActionSet keep;
    for (const Bus& b : state.buses) keep.destination.push_back(b.destination);
    const StepOutcome out = step(state, keep, net, cfg);
    // Zone demands (10, 30) with flags (1, 0): r = -1, so J = T.
    CHECK(out.r_pb == doctest::Approx(-1.0));
    CHECK(out.penalty == doctest::Approx(40.0));
    CHECK(out.reward == doctest::Approx(-80.0));
  }
  SUBCASE("epc waiting mode charges EPC-zone waiting time") {
    cfg.penalty_mode = PenaltyMode::epc_waiting;
    SimState state = reset(net, six_node_scenario(net), cfg, 1);
    ActionSet keep;
    for (const Bus& b : state.buses) keep.destination.push_back(b.destination);
    const StepOutcome out = step(state, keep, net, cfg);
    CHECK(out.penalty == doctest::Approx(10.0));  // o1's 10 waiting, one minute
    CHECK(out.reward == doctest::Approx(-50.0));
  }
}

TEST_CASE("trace exports round-trip and verify") {
  const Network net = load_six_node();
  const SimConfig cfg = default_config();
  const Scenario scenario = six_node_scenario(net);
  const EpisodeTrace trace = replay(net, scenario, cfg, itinerary_a());

  const auto dir = std::filesystem::temp_directory_path();
  const auto trace_path = (dir / "trace_rt.jsonl").string();
  const auto trips_path = (dir / "trips_rt.csv").string();
  write_trace_jsonl(trace_path, trace);
  write_trips_csv(trips_path, trace.trips);

  const EpisodeTrace loaded = read_trace_jsonl(trace_path);
  REQUIRE(loaded.steps.size() == trace.steps.size());
  CHECK(loaded.total_reward == doctest::Approx(trace.total_reward).epsilon(1e-12));
  CHECK(verify_trace(net, scenario, cfg, loaded));

  const auto trips = read_trips_csv(trips_path);
  REQUIRE(trips.size() == trace.trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) {
    CHECK(trips[i].bus_id == trace.trips[i].bus_id);
    CHECK(trips[i].passengers == trace.trips[i].passengers);
    CHECK(trips[i].trip_time == trace.trips[i].trip_time);
    CHECK(trips[i].waiting_time == trace.trips[i].waiting_time);
  }

  // Tampered rewards must fail verification.
  EpisodeTrace tampered = loaded;
  tampered.steps[2].reward += 1.0;
  CHECK_FALSE(verify_trace(net, scenario, cfg, tampered));
}

TEST_CASE("nearest queries follow shortest-path times") {
  const Network net = load_six_node();
  const SimState state = reset(net, six_node_scenario(net), default_config(), 1);

  CHECK(nearest_with_demand(net, state, "d1") == "o2");   // 10 beats 15
  CHECK(nearest_with_capacity(net, state, "o1") == "d2");  // 5 beats 15
  CHECK(nearest_with_demand(net, state, "o2") == "o2");   // itself at distance 0

  SimState drained = state;
  drained.node_demand.assign(drained.node_demand.size(), 0);
  CHECK_FALSE(nearest_with_demand(net, drained, "d1").has_value());

  SimState full = state;
  full.shelter_remaining.assign(full.shelter_remaining.size(), 0);
  CHECK_FALSE(nearest_with_capacity(net, full, "o1").has_value());

  SimState only_d2 = state;
  only_d2.shelter_remaining[net.node_or_throw("d1")] = 0;
  CHECK(nearest_with_capacity(net, only_d2, "d2") == "d2");
}
