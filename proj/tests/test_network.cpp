#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "evac/errors.hpp"
#include "evac/network.hpp"
#include "evac/rng.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace evac;
using namespace evac::testsupport;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("six-node network loads with expected shape") {
  const Network net = load_six_node();
  CHECK(net.nodes().size() == 6);
  CHECK(net.links().size() == 16);
  CHECK(net.zones().size() == 2);

  const Node& o1 = net.nodes()[net.node_or_throw("o1")];
  CHECK(o1.type == NodeType::origin);
  CHECK(o1.demand == 10);
  CHECK(o1.inequity_index == 1);
  CHECK(o1.zone_id == "o1");

  const Node& d2 = net.nodes()[net.node_or_throw("d2")];
  CHECK(d2.type == NodeType::shelter);
  CHECK(d2.capacity == 15);

  // Zones hold exactly their origin.
  const Zone& z1 = net.zones()[*net.find_zone("o1")];
  REQUIRE(z1.member_nodes.size() == 1);
  CHECK(net.nodes()[z1.member_nodes[0]].node_id == "o1");
  CHECK(z1.epc_flag == 1);
  CHECK(net.warnings().empty());
}

TEST_CASE("degenerate single-node network loads") {
  const auto nodes = write_temp(
      "net_deg_nodes.csv",
      "name,node_id,x_coord,y_coord,node_type,demand,capacity,inequity_index,zone_id\n"
      "hub,t1,0,0,node,0,0,0,\n");
  const auto links = write_temp("net_deg_links.csv", "link_id,from_node_id,to_node_id,travel_time\n");
  const auto zones = write_temp("net_deg_zones.csv", "zone_id,epc_flag,population\n");
  const Network net = load_network(nodes, links, zones);
  CHECK(net.nodes().size() == 1);
  CHECK(net.links().empty());
}

TEST_CASE("loader errors") {
  const std::string node_header =
      "name,node_id,x_coord,y_coord,node_type,demand,capacity,inequity_index,zone_id\n";
  const auto zones = write_temp("net_err_zones.csv", "zone_id,epc_flag,population\n");

  SUBCASE("missing column names the column") {
    const auto nodes = write_temp("net_err_nodes1.csv",
                                  "name,node_id,x_coord,y_coord,node_type,demand,capacity\n");
    const auto links = write_temp("net_err_links1.csv", "link_id,from_node_id,to_node_id,travel_time\n");
    CHECK_THROWS_WITH_AS(load_network(nodes, links, zones),
                         doctest::Contains("inequity_index"), SchemaError);
  }
  SUBCASE("dangling link reference names the link") {
    const auto nodes = write_temp("net_err_nodes2.csv",
                                  node_header + "a,n1,0,0,node,0,0,0,\n");
    const auto links = write_temp("net_err_links2.csv",
                                  "link_id,from_node_id,to_node_id,travel_time\n7,n1,n9,5\n");
    CHECK_THROWS_WITH_AS(load_network(nodes, links, zones), doctest::Contains("n9"),
                         ReferentialError);
  }
  SUBCASE("negative demand rejected") {
    const auto nodes = write_temp("net_err_nodes3.csv",
                                  node_header + "a,o1,0,0,origin,-3,0,0,\n");
    const auto links = write_temp("net_err_links3.csv", "link_id,from_node_id,to_node_id,travel_time\n");
    CHECK_THROWS_AS(load_network(nodes, links, zones), ValueError);
  }
  SUBCASE("non-positive travel time rejected") {
    const auto nodes = write_temp("net_err_nodes4.csv",
                                  node_header + "a,n1,0,0,node,0,0,0,\nb,n2,1,0,node,0,0,0,\n");
    const auto links = write_temp("net_err_links4.csv",
                                  "link_id,from_node_id,to_node_id,travel_time\n1,n1,n2,0\n");
    CHECK_THROWS_AS(load_network(nodes, links, zones), ValueError);
  }
  SUBCASE("inequity flag must mirror the zone") {
    const auto nodes = write_temp("net_err_nodes5.csv",
                                  node_header + "a,o1,0,0,origin,5,0,0,z1\n");
    const auto zones2 = write_temp("net_err_zones5.csv", "zone_id,epc_flag,population\nz1,1,5\n");
    const auto links = write_temp("net_err_links5.csv", "link_id,from_node_id,to_node_id,travel_time\n");
    CHECK_THROWS_AS(load_network(nodes, links, zones2), ValueError);
  }
}

TEST_CASE("unreachable origin produces a warning, not an error") {
  const auto nodes = write_temp(
      "net_warn_nodes.csv",
      "name,node_id,x_coord,y_coord,node_type,demand,capacity,inequity_index,zone_id\n"
      "a,o1,0,0,origin,5,0,0,\n"
      "b,d1,1,0,shelter,0,5,0,\n");
  const auto links = write_temp("net_warn_links.csv",
                                "link_id,from_node_id,to_node_id,travel_time\n1,o1,d1,5\n");
  const auto zones = write_temp("net_warn_zones.csv", "zone_id,epc_flag,population\n");
  const Network net = load_network(nodes, links, zones);
  REQUIRE(net.warnings().size() == 1);
  CHECK(net.warnings()[0].find("o1") != std::string::npos);
}

TEST_CASE("all sixteen single-link shortest paths match the link table") {
  const Network net = load_six_node();
  for (const Link& l : net.links()) {
    // Every link is itself a shortest path in this fixture.
    const auto result = shortest_path(net, l.from, l.to);
    REQUIRE(result.has_value());
    CHECK(result->total <= l.travel_time);
  }
  // Direct single-link distances spot-checked against the table rows.
  CHECK(shortest_path(net, "o2", "d1")->total.minutes() == 10.0);
  CHECK(shortest_path(net, "o2", "d1")->links == std::vector<std::int64_t>{11});
  CHECK(shortest_path(net, "o1", "d2")->total.minutes() == 5.0);
  CHECK(shortest_path(net, "d1", "o2")->total.minutes() == 10.0);
}

TEST_CASE("shortest path identity and multi-hop") {
  const Network net = load_six_node();
  const auto self = shortest_path(net, "o1", "o1");
  REQUIRE(self.has_value());
  CHECK(self->total.tenths() == 0);
  CHECK(self->links.empty());

  // n1 -> d2 goes through o1.
  const auto multi = shortest_path(net, "n1", "d2");
  REQUIRE(multi.has_value());
  CHECK(multi->total.minutes() == 10.0);
  CHECK(multi->links == std::vector<std::int64_t>{1, 8});

  // The enumeration oracle agrees on every pair.
  for (NodeIndex a = 0; a < 6; ++a) {
    for (NodeIndex b = 0; b < 6; ++b) {
      const auto fast = shortest_path(net, a, b);
      const auto slow = brute_shortest_tenths(net, a, b);
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) CHECK(fast->total.tenths() == *slow);
    }
  }
}

TEST_CASE("unreachable target yields empty result, not an exception") {
  const auto nodes = write_temp(
      "net_unreach_nodes.csv",
      "name,node_id,x_coord,y_coord,node_type,demand,capacity,inequity_index,zone_id\n"
      "a,n1,0,0,node,0,0,0,\n"
      "b,n2,1,0,node,0,0,0,\n");
  const auto links = write_temp("net_unreach_links.csv",
                                "link_id,from_node_id,to_node_id,travel_time\n1,n1,n2,5\n");
  const auto zones = write_temp("net_unreach_zones.csv", "zone_id,epc_flag,population\n");
  const Network net = load_network(nodes, links, zones);
  CHECK_FALSE(shortest_path(net, "n2", "n1").has_value());
  CHECK_THROWS_AS(shortest_path(net, "n2", "nope"), ReferentialError);
}

TEST_CASE("path structure is consistent and triangle inequality holds") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto inst = make_synthetic(seed);
    const Network& net = *inst.net;
    const auto n = static_cast<NodeIndex>(net.nodes().size());
    std::vector<ShortestPathTree> trees;
    for (NodeIndex i = 0; i < n; ++i) trees.push_back(dijkstra(net, i));

    for (NodeIndex a = 0; a < n; ++a) {
      for (NodeIndex b = 0; b < n; ++b) {
        REQUIRE(trees[a].reachable(b));
        // Consecutive links chain from a to b and times add up.
        const auto path = shortest_path(net, a, b);
        REQUIRE(path.has_value());
        NodeIndex cur = a;
        std::int64_t total = 0;
        for (const auto link_id : path->links) {
          const Link& l = net.links()[*net.find_link(link_id)];
          CHECK(l.from == cur);
          cur = l.to;
          total += l.travel_time.tenths();
        }
        CHECK(cur == b);
        CHECK(total == path->total.tenths());
        for (NodeIndex c = 0; c < n; ++c) {
          CHECK(trees[a].dist_tenths[c] <=
                trees[a].dist_tenths[b] + trees[b].dist_tenths[c]);
        }
      }
    }
  }
}

TEST_CASE("save and reload round-trips every field") {
  const Network net = load_six_node();
  const auto dir = std::filesystem::temp_directory_path();
  const auto nodes = (dir / "rt_nodes.csv").string();
  const auto links = (dir / "rt_links.csv").string();
  const auto zones = (dir / "rt_zones.csv").string();
  save_network(net, nodes, links, zones);
  const Network again = load_network(nodes, links, zones);

  REQUIRE(again.nodes().size() == net.nodes().size());
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    const Node& a = net.nodes()[i];
    const Node& b = again.nodes()[i];
    CHECK(a.node_id == b.node_id);
    CHECK(a.name == b.name);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.type == b.type);
    CHECK(a.demand == b.demand);
    CHECK(a.capacity == b.capacity);
    CHECK(a.inequity_index == b.inequity_index);
    CHECK(a.zone_id == b.zone_id);
  }
  REQUIRE(again.links().size() == net.links().size());
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    CHECK(net.links()[i].link_id == again.links()[i].link_id);
    CHECK(net.links()[i].from == again.links()[i].from);
    CHECK(net.links()[i].to == again.links()[i].to);
    CHECK(net.links()[i].travel_time == again.links()[i].travel_time);
  }
  REQUIRE(again.zones().size() == net.zones().size());
  for (std::size_t i = 0; i < net.zones().size(); ++i) {
    CHECK(net.zones()[i].zone_id == again.zones()[i].zone_id);
    CHECK(net.zones()[i].epc_flag == again.zones()[i].epc_flag);
    CHECK(net.zones()[i].population == again.zones()[i].population);
  }
}

TEST_CASE("fractional travel times keep tenth-of-a-minute resolution") {
  CHECK(Duration::parse("2.5").tenths() == 25);
  CHECK(Duration::parse("5").tenths() == 50);
  CHECK(Duration::from_minutes(0.25).tenths() == 3);  // rounded to nearest tenth
  CHECK(Duration::from_tenths(25).to_string() == "2.5");
  CHECK(Duration::from_tenths(50).to_string() == "5");
}

TEST_CASE("without_links removes routing edges") {
  const Network net = load_six_node();
  const Network cut = net.without_links({11});  // o2 -> d1 direct
  const auto path = shortest_path(cut, "o2", "d1");
  REQUIRE(path.has_value());
  CHECK(path->total.minutes() > 10.0);
}
