#include "evac/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>

#include "evac/csv.hpp"
#include "evac/errors.hpp"

namespace evac {

namespace {
constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 2;

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

NodeType parse_node_type(const std::string& label) {
  if (label == "origin") return NodeType::origin;
  if (label == "shelter") return NodeType::shelter;
  if (label == "transit" || label == "node") return NodeType::transit;
  throw ValueError("unknown node_type '" + label + "'");
}

std::string node_type_label(NodeType t) {
  switch (t) {
    case NodeType::origin: return "origin";
    case NodeType::shelter: return "shelter";
    case NodeType::transit: return "transit";
  }
  return "transit";
}

Network Network::from_parts(std::vector<Node> nodes, std::vector<Link> links,
                            std::vector<Zone> zones) {
  Network net;

  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.node_id < b.node_id; });
  std::sort(links.begin(), links.end(),
            [](const Link& a, const Link& b) { return a.link_id < b.link_id; });
  std::sort(zones.begin(), zones.end(),
            [](const Zone& a, const Zone& b) { return a.zone_id < b.zone_id; });

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!net.node_index_.emplace(n.node_id, static_cast<NodeIndex>(i)).second) {
      throw ValueError("duplicate node_id '" + n.node_id + "'");
    }
    if (n.demand < 0) throw ValueError("node '" + n.node_id + "': negative demand");
    if (n.capacity < 0) throw ValueError("node '" + n.node_id + "': negative capacity");
    if (n.type == NodeType::origin && n.capacity != 0) {
      throw ValueError("origin node '" + n.node_id + "' must have capacity 0");
    }
    if (n.type == NodeType::shelter && n.demand != 0) {
      throw ValueError("shelter node '" + n.node_id + "' must have demand 0");
    }
    if (n.type == NodeType::transit && (n.demand != 0 || n.capacity != 0)) {
      throw ValueError("transit node '" + n.node_id + "' must have demand 0 and capacity 0");
    }
    if (n.inequity_index != 0 && n.inequity_index != 1) {
      throw ValueError("node '" + n.node_id + "': inequity_index must be 0 or 1");
    }
  }

  for (std::size_t i = 0; i < zones.size(); ++i) {
    Zone& z = zones[i];
    if (!net.zone_index_.emplace(z.zone_id, static_cast<ZoneIndex>(i)).second) {
      throw ValueError("duplicate zone_id '" + z.zone_id + "'");
    }
    if (z.population < 0) throw ValueError("zone '" + z.zone_id + "': negative population");
    if (z.epc_flag != 0 && z.epc_flag != 1) {
      throw ValueError("zone '" + z.zone_id + "': epc_flag must be 0 or 1");
    }
    z.member_nodes.clear();
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Node& n = nodes[i];
    if (n.zone_id.empty()) {
      n.zone = -1;
      if (n.inequity_index != 0) {
        throw ValueError("node '" + n.node_id + "': inequity_index set but node has no zone");
      }
      continue;
    }
    const auto it = net.zone_index_.find(n.zone_id);
    if (it == net.zone_index_.end()) {
      throw ReferentialError("node '" + n.node_id + "' references unknown zone '" + n.zone_id + "'");
    }
    n.zone = it->second;
    zones[n.zone].member_nodes.push_back(static_cast<NodeIndex>(i));
    if (n.inequity_index != zones[n.zone].epc_flag) {
      throw ValueError("node '" + n.node_id + "': inequity_index disagrees with zone '" +
                       n.zone_id + "' epc_flag");
    }
  }

  net.outgoing_.assign(nodes.size(), {});
  std::vector<int> indegree(nodes.size(), 0);
  for (std::size_t i = 0; i < links.size(); ++i) {
    Link& l = links[i];
    if (!net.link_index_.emplace(l.link_id, static_cast<LinkIndex>(i)).second) {
      throw ValueError("duplicate link_id " + std::to_string(l.link_id));
    }
    if (l.from < 0 || l.to < 0 || l.from >= static_cast<NodeIndex>(nodes.size()) ||
        l.to >= static_cast<NodeIndex>(nodes.size())) {
      throw ReferentialError("link " + std::to_string(l.link_id) + " references a missing node");
    }
    if (l.travel_time.tenths() <= 0) {
      throw ValueError("link " + std::to_string(l.link_id) + ": travel_time must be positive");
    }
    net.outgoing_[l.from].push_back(static_cast<LinkIndex>(i));
    if (l.from != l.to) indegree[l.to]++;
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if ((n.type == NodeType::origin || n.type == NodeType::shelter) && indegree[i] == 0) {
      net.warnings_.push_back(node_type_label(n.type) + " node '" + n.node_id +
                              "' is not reachable from any other node");
    }
  }

  net.nodes_ = std::move(nodes);
  net.links_ = std::move(links);
  net.zones_ = std::move(zones);
  return net;
}

std::optional<NodeIndex> Network::find_node(const std::string& node_id) const {
  const auto it = node_index_.find(node_id);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::node_or_throw(const std::string& node_id) const {
  const auto idx = find_node(node_id);
  if (!idx) throw ReferentialError("unknown node '" + node_id + "'");
  return *idx;
}

std::optional<LinkIndex> Network::find_link(std::int64_t link_id) const {
  const auto it = link_index_.find(link_id);
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ZoneIndex> Network::find_zone(const std::string& zone_id) const {
  const auto it = zone_index_.find(zone_id);
  if (it == zone_index_.end()) return std::nullopt;
  return it->second;
}

Network Network::without_links(const std::vector<std::int64_t>& link_ids) const {
  std::set<std::int64_t> removed(link_ids.begin(), link_ids.end());
  std::vector<Link> kept;
  kept.reserve(links_.size());
  for (const Link& l : links_) {
    if (!removed.count(l.link_id)) kept.push_back(l);
  }
  return from_parts(nodes_, std::move(kept), zones_);
}

std::vector<NodeIndex> Network::candidate_universe() const {
  std::vector<NodeIndex> result;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].type != NodeType::transit) result.push_back(static_cast<NodeIndex>(i));
  }
  return result;
}

Network load_network(const std::string& nodes_path, const std::string& links_path,
                     const std::string& zones_path) {
  const csv::Table nt = csv::read_file(nodes_path);
  const csv::Table lt = csv::read_file(links_path);
  const csv::Table zt = csv::read_file(zones_path);

  const std::size_t c_name = nt.column("name");
  const std::size_t c_id = nt.column("node_id");
  const std::size_t c_x = nt.column("x_coord");
  const std::size_t c_y = nt.column("y_coord");
  const std::size_t c_type = nt.column("node_type");
  const std::size_t c_dem = nt.column("demand");
  const std::size_t c_cap = nt.column("capacity");
  const std::size_t c_ineq = nt.column("inequity_index");
  const std::size_t c_zone = nt.find_column("zone_id");

  std::vector<Node> nodes;
  nodes.reserve(nt.rows.size());
  for (std::size_t r = 0; r < nt.rows.size(); ++r) {
    Node n;
    n.name = nt.rows[r][c_name];
    n.node_id = nt.rows[r][c_id];
    n.x = csv::to_double(nt, r, c_x);
    n.y = csv::to_double(nt, r, c_y);
    n.type = parse_node_type(nt.rows[r][c_type]);
    n.demand = csv::to_int(nt, r, c_dem);
    n.capacity = csv::to_int(nt, r, c_cap);
    n.inequity_index = static_cast<int>(csv::to_int(nt, r, c_ineq));
    if (c_zone != csv::Table::npos) n.zone_id = nt.rows[r][c_zone];
    nodes.push_back(std::move(n));
  }

  const std::size_t z_id = zt.column("zone_id");
  const std::size_t z_epc = zt.column("epc_flag");
  const std::size_t z_pop = zt.column("population");
  std::vector<Zone> zones;
  zones.reserve(zt.rows.size());
  for (std::size_t r = 0; r < zt.rows.size(); ++r) {
    Zone z;
    z.zone_id = zt.rows[r][z_id];
    z.epc_flag = static_cast<int>(csv::to_int(zt, r, z_epc));
    z.population = csv::to_int(zt, r, z_pop);
    zones.push_back(std::move(z));
  }

  const std::size_t l_id = lt.column("link_id");
  const std::size_t l_from = lt.column("from_node_id");
  const std::size_t l_to = lt.column("to_node_id");
  const std::size_t l_tt = lt.column("travel_time");

  // Node ids must be resolvable to final (sorted) indices before Link
  // records are built.
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (const Node& n : nodes) ids.push_back(n.node_id);
  std::sort(ids.begin(), ids.end());
  auto lookup = [&](const std::string& id) -> NodeIndex {
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return static_cast<NodeIndex>(it - ids.begin());
  };

  std::vector<Link> links;
  links.reserve(lt.rows.size());
  for (std::size_t r = 0; r < lt.rows.size(); ++r) {
    Link l;
    l.link_id = csv::to_int(lt, r, l_id);
    l.from = lookup(lt.rows[r][l_from]);
    l.to = lookup(lt.rows[r][l_to]);
    if (l.from < 0 || l.to < 0) {
      throw ReferentialError(links_path + ": link " + std::to_string(l.link_id) +
                             " references unknown node '" +
                             (l.from < 0 ? lt.rows[r][l_from] : lt.rows[r][l_to]) + "'");
    }
    const double tt = csv::to_double(lt, r, l_tt);
    if (tt <= 0.0) {
      throw ValueError(links_path + ": link " + std::to_string(l.link_id) +
                       ": travel_time must be positive");
    }
    l.travel_time = Duration::from_minutes(tt);
    links.push_back(l);
  }

  return Network::from_parts(std::move(nodes), std::move(links), std::move(zones));
}

void save_network(const Network& net, const std::string& nodes_path,
                  const std::string& links_path, const std::string& zones_path) {
  std::vector<std::vector<std::string>> node_rows;
  for (const Node& n : net.nodes()) {
    node_rows.push_back({n.name, n.node_id, format_coord(n.x), format_coord(n.y),
                         node_type_label(n.type), std::to_string(n.demand),
                         std::to_string(n.capacity), std::to_string(n.inequity_index),
                         n.zone_id});
  }
  csv::write_file(nodes_path,
                  {"name", "node_id", "x_coord", "y_coord", "node_type", "demand", "capacity",
                   "inequity_index", "zone_id"},
                  node_rows);

  std::vector<std::vector<std::string>> link_rows;
  for (const Link& l : net.links()) {
    link_rows.push_back({std::to_string(l.link_id), net.nodes()[l.from].node_id,
                         net.nodes()[l.to].node_id, l.travel_time.to_string()});
  }
  csv::write_file(links_path, {"link_id", "from_node_id", "to_node_id", "travel_time"},
                  link_rows);

  std::vector<std::vector<std::string>> zone_rows;
  for (const Zone& z : net.zones()) {
    zone_rows.push_back({z.zone_id, std::to_string(z.epc_flag), std::to_string(z.population)});
  }
  csv::write_file(zones_path, {"zone_id", "epc_flag", "population"}, zone_rows);
}

bool ShortestPathTree::reachable(NodeIndex n) const { return dist_tenths[n] < kUnreachable; }

ShortestPathTree dijkstra(const Network& net, NodeIndex source) {
  const std::size_t n = net.nodes().size();
  ShortestPathTree tree;
  tree.dist_tenths.assign(n, kUnreachable);
  tree.parent_link.assign(n, -1);
  tree.dist_tenths[source] = 0;

  using Entry = std::pair<std::int64_t, NodeIndex>;  // (dist, node); node order breaks ties
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d != tree.dist_tenths[u]) continue;
    for (const LinkIndex li : net.outgoing(u)) {
      const Link& l = net.links()[li];
      const std::int64_t nd = d + l.travel_time.tenths();
      if (nd < tree.dist_tenths[l.to]) {
        tree.dist_tenths[l.to] = nd;
        tree.parent_link[l.to] = li;
        queue.emplace(nd, l.to);
      }
    }
  }
  return tree;
}

std::optional<PathResult> shortest_path(const Network& net, NodeIndex from, NodeIndex to) {
  const ShortestPathTree tree = dijkstra(net, from);
  if (!tree.reachable(to)) return std::nullopt;
  PathResult result;
  result.total = tree.dist(to);
  NodeIndex cur = to;
  while (cur != from) {
    const LinkIndex li = tree.parent_link[cur];
    result.links.push_back(net.links()[li].link_id);
    cur = net.links()[li].from;
  }
  std::reverse(result.links.begin(), result.links.end());
  return result;
}

std::optional<PathResult> shortest_path(const Network& net, const std::string& from,
                                        const std::string& to) {
  return shortest_path(net, net.node_or_throw(from), net.node_or_throw(to));
}

}  // namespace evac
