#ifndef EVAC_NETWORK_HPP_
#define EVAC_NETWORK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "evac/duration.hpp"

namespace evac {

using NodeIndex = std::int32_t;
using LinkIndex = std::int32_t;
using ZoneIndex = std::int32_t;

enum class NodeType { origin, shelter, transit };

NodeType parse_node_type(const std::string& label);
std::string node_type_label(NodeType t);

struct Node {
  std::string node_id;
  std::string name;
  double x = 0.0;
  double y = 0.0;
  NodeType type = NodeType::transit;
  std::int64_t demand = 0;    // evacuees waiting at an origin
  std::int64_t capacity = 0;  // remaining shelter capacity
  int inequity_index = 0;
  std::string zone_id;        // empty = unzoned
  ZoneIndex zone = -1;
};

struct Link {
  std::int64_t link_id = 0;
  NodeIndex from = -1;
  NodeIndex to = -1;
  Duration travel_time;
};

struct Zone {
  std::string zone_id;
  int epc_flag = 0;
  std::int64_t population = 0;
  std::vector<NodeIndex> member_nodes;  // sorted by node index
};

// Immutable directed transportation graph. Nodes are stored sorted by
// node_id, links by link_id, zones by zone_id, so indices give a canonical
// deterministic ordering. Safe to share read-only across threads.
class Network {
 public:
  // Validates and indexes raw records. Throws SchemaError / ReferentialError /
  // ValueError; soft issues (unreachable origins or shelters) land in
  // warnings().
  static Network from_parts(std::vector<Node> nodes, std::vector<Link> links,
                            std::vector<Zone> zones);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<Zone>& zones() const { return zones_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::optional<NodeIndex> find_node(const std::string& node_id) const;
  NodeIndex node_or_throw(const std::string& node_id) const;
  std::optional<LinkIndex> find_link(std::int64_t link_id) const;
  std::optional<ZoneIndex> find_zone(const std::string& zone_id) const;

  const std::vector<LinkIndex>& outgoing(NodeIndex n) const { return outgoing_[n]; }

  // Copy with the given links removed from routing (hazard impairment).
  Network without_links(const std::vector<std::int64_t>& link_ids) const;

  // Node indices of all origins and shelters, in index (= node_id) order.
  // This is the stable candidate universe for observations and actions.
  std::vector<NodeIndex> candidate_universe() const;

 private:
  Network() = default;

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<Zone> zones_;
  std::vector<std::vector<LinkIndex>> outgoing_;
  std::unordered_map<std::string, NodeIndex> node_index_;
  std::unordered_map<std::int64_t, LinkIndex> link_index_;
  std::unordered_map<std::string, ZoneIndex> zone_index_;
  std::vector<std::string> warnings_;
};

// GMNS-style CSV ingestion. Required node columns: name, node_id, x_coord,
// y_coord, node_type, demand, capacity, inequity_index (zone_id optional);
// link columns: link_id, from_node_id, to_node_id, travel_time; zone
// columns: zone_id, epc_flag, population.
Network load_network(const std::string& nodes_path, const std::string& links_path,
                     const std::string& zones_path);

void save_network(const Network& net, const std::string& nodes_path,
                  const std::string& links_path, const std::string& zones_path);

struct PathResult {
  std::vector<std::int64_t> links;  // link_ids, in travel order
  Duration total;
};

// Single-source shortest-path tree (travel time, tenths). dist is
// INT64_MAX/2 for unreachable nodes; parent_link is the link used to settle
// a node. Ties expand lower node indices first, so results are
// deterministic.
struct ShortestPathTree {
  std::vector<std::int64_t> dist_tenths;
  std::vector<LinkIndex> parent_link;

  bool reachable(NodeIndex n) const;
  Duration dist(NodeIndex n) const { return Duration::from_tenths(dist_tenths[n]); }
};

ShortestPathTree dijkstra(const Network& net, NodeIndex source);

// Minimum-travel-time directed path, or nullopt when no path exists.
std::optional<PathResult> shortest_path(const Network& net, const std::string& from,
                                        const std::string& to);
std::optional<PathResult> shortest_path(const Network& net, NodeIndex from, NodeIndex to);

}  // namespace evac

#endif  // EVAC_NETWORK_HPP_
