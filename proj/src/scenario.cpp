#include "evac/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"

#include "evac/csv.hpp"
#include "evac/errors.hpp"
#include "evac/rng.hpp"

namespace evac {

HazardLabel parse_hazard_label(const std::string& label) {
  if (label == "wildfire") return HazardLabel::wildfire;
  if (label == "landslide") return HazardLabel::landslide;
  if (label == "flood") return HazardLabel::flood;
  if (label == "earthquake") return HazardLabel::earthquake;
  if (label == "random") return HazardLabel::random;
  throw ValueError("unknown hazard label '" + label + "'");
}

std::string hazard_label_name(HazardLabel label) {
  switch (label) {
    case HazardLabel::wildfire: return "wildfire";
    case HazardLabel::landslide: return "landslide";
    case HazardLabel::flood: return "flood";
    case HazardLabel::earthquake: return "earthquake";
    case HazardLabel::random: return "random";
  }
  return "random";
}

void HazardSpec::validate(const Network& net) const {
  if (mode == Mode::reproduce) {
    if (zone_list.empty()) throw ContractError("reproduce mode requires a nonempty zone_list");
    for (const auto& z : zone_list) {
      if (!net.find_zone(z)) throw ReferentialError("hazard spec references unknown zone '" + z + "'");
    }
  } else {
    if (impairment_scale < 1 ||
        impairment_scale > static_cast<int>(net.zones().size())) {
      throw ContractError("impairment_scale must be between 1 and the zone count");
    }
    for (const auto& [z, w] : zone_weights) {
      if (!net.find_zone(z)) throw ReferentialError("zone_weights references unknown zone '" + z + "'");
      if (w < 0.0) throw ValueError("zone weight for '" + z + "' is negative");
    }
  }
}

HazardSpec read_hazard_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open hazard spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("hazard spec '" + path + "': " + e.what());
  }
  HazardSpec spec;
  const std::string mode = j.value("mode", "randomized");
  if (mode == "reproduce") spec.mode = HazardSpec::Mode::reproduce;
  else if (mode == "randomized") spec.mode = HazardSpec::Mode::randomized;
  else throw DataError("hazard spec '" + path + "': unknown mode '" + mode + "'");
  spec.impairment_scale = j.value("impairment_scale", 1);
  if (j.contains("zone_list")) spec.zone_list = j["zone_list"].get<std::vector<std::string>>();
  if (j.contains("zone_weights")) {
    for (const auto& [k, v] : j["zone_weights"].items()) spec.zone_weights[k] = v.get<double>();
  }
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.hazard_label = parse_hazard_label(j.value("hazard_label", std::string("random")));
  spec.disable_links = j.value("disable_links", false);
  return spec;
}

std::vector<std::string> select_impaired_zones(const HazardSpec& spec, const Network& net) {
  spec.validate(net);
  if (spec.mode == HazardSpec::Mode::reproduce) return spec.zone_list;

  std::vector<std::string> ids;
  std::vector<double> weights;
  for (const Zone& z : net.zones()) {
    ids.push_back(z.zone_id);
    const auto it = spec.zone_weights.find(z.zone_id);
    weights.push_back(it == spec.zone_weights.end() ? 1.0 : it->second);
  }

  // Weighted sampling without replacement.
  Rng rng(spec.seed);
  std::vector<std::string> selected;
  for (int k = 0; k < spec.impairment_scale; ++k) {
    double total = 0.0;
    for (const double w : weights) total += w;
    if (total <= 0.0) throw ContractError("zone weights sum to zero before selection finished");
    double u = rng.uniform01() * total;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      pick = i;
      u -= weights[i];
      if (u < 0.0) break;
    }
    selected.push_back(ids[pick]);
    weights[pick] = 0.0;
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

EvacueeEstimate estimate_evacuees(const std::vector<std::string>& zones, const Network& net) {
  EvacueeEstimate est;
  for (const std::string& zone_id : zones) {
    const auto zi = net.find_zone(zone_id);
    if (!zi) throw ReferentialError("estimate_evacuees: unknown zone '" + zone_id + "'");
    const Zone& zone = net.zones()[*zi];

    std::vector<NodeIndex> origins;
    for (const NodeIndex n : zone.member_nodes) {
      if (net.nodes()[n].type == NodeType::origin) origins.push_back(n);
    }
    if (origins.empty()) {
      est.warnings.push_back("zone '" + zone_id + "' has no origin nodes; skipped");
      continue;
    }
    // member_nodes is index-sorted, which is node_id order; the remainder
    // therefore lands on the lowest node_ids.
    const std::int64_t n = static_cast<std::int64_t>(origins.size());
    const std::int64_t base = zone.population / n;
    const std::int64_t remainder = zone.population % n;
    for (std::int64_t i = 0; i < n; ++i) {
      est.node_counts[net.nodes()[origins[i]].node_id] = base + (i < remainder ? 1 : 0);
    }
  }
  return est;
}

BuildResult build_scenario(const HazardSpec& spec, const Network& net,
                           std::vector<BusPlacement> fleet) {
  BuildResult result;
  Scenario& sc = result.scenario;
  sc.impaired_zones = select_impaired_zones(spec, net);
  sc.hazard_label = spec.hazard_label;
  sc.seed = spec.seed;

  EvacueeEstimate est = estimate_evacuees(sc.impaired_zones, net);
  sc.origin_demands = std::move(est.node_counts);
  result.report.warnings = std::move(est.warnings);

  for (BusPlacement& p : fleet) {
    const auto li = net.find_link(p.link_id);
    if (!li) {
      throw ReferentialError("fleet places bus '" + p.bus_id + "' on unknown link " +
                             std::to_string(p.link_id));
    }
    if (p.destination.empty()) p.destination = net.nodes()[net.links()[*li].to].node_id;
  }
  sc.bus_placements = std::move(fleet);

  if (spec.disable_links) {
    const std::set<std::string> impaired(sc.impaired_zones.begin(), sc.impaired_zones.end());
    for (const Link& l : net.links()) {
      const std::string& zf = net.nodes()[l.from].zone_id;
      const std::string& zt = net.nodes()[l.to].zone_id;
      if (!zf.empty() && !zt.empty() && impaired.count(zf) && impaired.count(zt)) {
        sc.disabled_links.push_back(l.link_id);
      }
    }
  }

  // Feasibility: can every demand node still reach some shelter?
  const Network effective =
      sc.disabled_links.empty() ? net : net.without_links(sc.disabled_links);
  for (const auto& [node_id, demand] : sc.origin_demands) {
    if (demand <= 0) continue;
    const auto idx = effective.find_node(node_id);
    bool reachable = false;
    if (idx) {
      const ShortestPathTree tree = dijkstra(effective, *idx);
      for (std::size_t i = 0; i < effective.nodes().size(); ++i) {
        if (effective.nodes()[i].type == NodeType::shelter &&
            tree.reachable(static_cast<NodeIndex>(i))) {
          reachable = true;
          break;
        }
      }
    }
    result.report.shelter_reachable[node_id] = reachable;
    if (!reachable) {
      result.report.feasible = false;
      result.report.warnings.push_back("demand node '" + node_id +
                                       "' cannot reach any shelter on the effective network");
    }
  }
  return result;
}

void write_scenario_json(const std::string& path, const Scenario& scenario) {
  nlohmann::json j;
  j["impaired_zones"] = scenario.impaired_zones;
  j["origin_demands"] = nlohmann::json::object();
  for (const auto& [node, count] : scenario.origin_demands) j["origin_demands"][node] = count;
  j["hazard_label"] = hazard_label_name(scenario.hazard_label);
  j["disabled_links"] = scenario.disabled_links;
  j["seed"] = scenario.seed;
  j["fleet"] = nlohmann::json::array();
  for (const BusPlacement& p : scenario.bus_placements) {
    j["fleet"].push_back({{"bus_id", p.bus_id},
                          {"link_id", p.link_id},
                          {"time_to_travel", p.time_to_travel.minutes()},
                          {"capacity", p.capacity},
                          {"onboard", p.onboard},
                          {"destination", p.destination}});
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write scenario '" + path + "'");
  out << j.dump(2) << "\n";
}

Scenario read_scenario_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open scenario '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("scenario '" + path + "': " + e.what());
  }
  Scenario sc;
  if (j.contains("impaired_zones")) {
    sc.impaired_zones = j["impaired_zones"].get<std::vector<std::string>>();
  }
  if (j.contains("origin_demands")) {
    for (const auto& [node, count] : j["origin_demands"].items()) {
      sc.origin_demands[node] = count.get<std::int64_t>();
    }
  }
  sc.hazard_label = parse_hazard_label(j.value("hazard_label", std::string("random")));
  if (j.contains("disabled_links")) {
    sc.disabled_links = j["disabled_links"].get<std::vector<std::int64_t>>();
  }
  sc.seed = j.value("seed", std::uint64_t{0});
  for (const auto& b : j.value("fleet", nlohmann::json::array())) {
    BusPlacement p;
    p.bus_id = b.at("bus_id").get<std::string>();
    p.link_id = b.at("link_id").get<std::int64_t>();
    p.time_to_travel = Duration::from_minutes(b.at("time_to_travel").get<double>());
    p.capacity = b.at("capacity").get<int>();
    p.onboard = b.value("onboard", 0);
    p.destination = b.value("destination", std::string());
    sc.bus_placements.push_back(std::move(p));
  }
  return sc;
}

void write_scenario_nodes_csv(const std::string& path, const Scenario& scenario,
                              const Network& net) {
  std::vector<std::vector<std::string>> rows;
  for (const Node& n : net.nodes()) {
    std::int64_t demand = 0;
    const auto it = scenario.origin_demands.find(n.node_id);
    if (it != scenario.origin_demands.end()) demand = it->second;
    char x[32], y[32];
    std::snprintf(x, sizeof(x), "%.17g", n.x);
    std::snprintf(y, sizeof(y), "%.17g", n.y);
    rows.push_back({n.name, n.node_id, x, y, node_type_label(n.type), std::to_string(demand),
                    std::to_string(n.capacity), std::to_string(n.inequity_index), n.zone_id});
  }
  csv::write_file(path,
                  {"name", "node_id", "x_coord", "y_coord", "node_type", "demand", "capacity",
                   "inequity_index", "zone_id"},
                  rows);
}

}  // namespace evac
