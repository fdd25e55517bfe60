#include "evac/gtfs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "evac/csv.hpp"
#include "evac/errors.hpp"

namespace evac::gtfs {

namespace {
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

int weekday_of_yyyymmdd(std::int64_t yyyymmdd) {
  const int y0 = static_cast<int>(yyyymmdd / 10000);
  const int m0 = static_cast<int>((yyyymmdd / 100) % 100);
  const int d = static_cast<int>(yyyymmdd % 100);
  // Zeller's congruence, mapped so 0 = Monday.
  int m = m0, y = y0;
  if (m < 3) {
    m += 12;
    --y;
  }
  const int k = y % 100, j = y / 100;
  const int h = (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;  // 0 = Saturday
  return (h + 5) % 7;
}

}  // namespace

Weekday parse_weekday(const std::string& name) {
  static const std::vector<std::string> names = {"monday",   "tuesday", "wednesday", "thursday",
                                                 "friday",   "saturday", "sunday"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (name == names[i]) return static_cast<Weekday>(i);
  }
  throw ValueError("unknown weekday '" + name + "'");
}

std::string weekday_name(Weekday d) {
  static const char* names[] = {"monday", "tuesday", "wednesday", "thursday",
                                "friday", "saturday", "sunday"};
  return names[static_cast<int>(d)];
}

std::int64_t parse_gtfs_time(const std::string& text) {
  int h = 0, m = 0, s = 0;
  char extra = 0;
  const int matched = std::sscanf(text.c_str(), "%d:%d:%d%c", &h, &m, &s, &extra);
  if (matched != 3 || h < 0 || m < 0 || m > 59 || s < 0 || s > 59) {
    throw ValueError("malformed time '" + text + "'");
  }
  return static_cast<std::int64_t>(h) * 3600 + m * 60 + s;
}

std::string format_gtfs_time(std::int64_t seconds) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld",
                static_cast<long long>(seconds / 3600), static_cast<long long>((seconds / 60) % 60),
                static_cast<long long>(seconds % 60));
  return buf;
}

std::optional<std::int32_t> GtfsFeed::find_stop(const std::string& stop_id) const {
  const auto it = std::lower_bound(stops.begin(), stops.end(), stop_id,
                                   [](const Stop& s, const std::string& id) { return s.stop_id < id; });
  if (it == stops.end() || it->stop_id != stop_id) return std::nullopt;
  return static_cast<std::int32_t>(it - stops.begin());
}

bool GtfsFeed::service_active(const std::string& service_id, Weekday day) const {
  const auto it = std::lower_bound(
      services.begin(), services.end(), service_id,
      [](const Service& s, const std::string& id) { return s.service_id < id; });
  if (it == services.end() || it->service_id != service_id) return false;
  return it->active[static_cast<int>(day)];
}

GtfsFeed parse_feed(const std::string& directory) {
  const fs::path dir(directory);
  for (const char* required : {"stops.txt", "trips.txt", "stop_times.txt"}) {
    if (!fs::exists(dir / required)) {
      throw SchemaError("gtfs feed '" + directory + "' is missing " + required);
    }
  }
  const bool has_calendar = fs::exists(dir / "calendar.txt");
  if (!has_calendar && !fs::exists(dir / "calendar_dates.txt")) {
    throw SchemaError("gtfs feed '" + directory +
                      "' is missing calendar.txt (or calendar_dates.txt)");
  }

  GtfsFeed feed;

  {
    const csv::Table t = csv::read_file((dir / "stops.txt").string());
    const std::size_t c_id = t.column("stop_id");
    const std::size_t c_lat = t.column("stop_lat");
    const std::size_t c_lon = t.column("stop_lon");
    const std::size_t c_name = t.find_column("stop_name");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      Stop s;
      s.stop_id = t.rows[r][c_id];
      s.lat = csv::to_double(t, r, c_lat);
      s.lon = csv::to_double(t, r, c_lon);
      if (c_name != csv::Table::npos) s.name = t.rows[r][c_name];
      feed.stops.push_back(std::move(s));
    }
    std::sort(feed.stops.begin(), feed.stops.end(),
              [](const Stop& a, const Stop& b) { return a.stop_id < b.stop_id; });
  }

  {
    const csv::Table t = csv::read_file((dir / "trips.txt").string());
    const std::size_t c_trip = t.column("trip_id");
    const std::size_t c_route = t.column("route_id");
    const std::size_t c_service = t.column("service_id");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      Trip trip;
      trip.trip_id = t.rows[r][c_trip];
      trip.route_id = t.rows[r][c_route];
      trip.service_id = t.rows[r][c_service];
      feed.trips.push_back(std::move(trip));
    }
    std::sort(feed.trips.begin(), feed.trips.end(),
              [](const Trip& a, const Trip& b) { return a.trip_id < b.trip_id; });
  }

  {
    const csv::Table t = csv::read_file((dir / "stop_times.txt").string());
    const std::size_t c_trip = t.column("trip_id");
    const std::size_t c_arr = t.column("arrival_time");
    const std::size_t c_dep = t.column("departure_time");
    const std::size_t c_stop = t.column("stop_id");
    const std::size_t c_seq = t.column("stop_sequence");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const std::string& trip_id = t.rows[r][c_trip];
      const auto trip_it = std::lower_bound(
          feed.trips.begin(), feed.trips.end(), trip_id,
          [](const Trip& a, const std::string& id) { return a.trip_id < id; });
      if (trip_it == feed.trips.end() || trip_it->trip_id != trip_id) {
        throw ReferentialError("stop_times.txt line " + std::to_string(r + 2) +
                               ": unknown trip '" + trip_id + "'");
      }
      StopTime st;
      try {
        st.arrival = parse_gtfs_time(t.rows[r][c_arr]);
        st.departure = parse_gtfs_time(t.rows[r][c_dep]);
      } catch (const ValueError& e) {
        throw ValueError("stop_times.txt line " + std::to_string(r + 2) + ": " + e.what());
      }
      const auto stop_idx = feed.find_stop(t.rows[r][c_stop]);
      if (!stop_idx) {
        throw ReferentialError("stop_times.txt line " + std::to_string(r + 2) +
                               ": unknown stop '" + t.rows[r][c_stop] + "'");
      }
      st.stop = *stop_idx;
      st.stop_sequence = csv::to_int(t, r, c_seq);
      if (st.departure < st.arrival) {
        throw ValueError("stop_times.txt line " + std::to_string(r + 2) +
                         ": departure before arrival");
      }
      trip_it->stop_times.push_back(st);
    }
    for (Trip& trip : feed.trips) {
      std::sort(trip.stop_times.begin(), trip.stop_times.end(),
                [](const StopTime& a, const StopTime& b) { return a.stop_sequence < b.stop_sequence; });
      for (std::size_t i = 1; i < trip.stop_times.size(); ++i) {
        if (trip.stop_times[i].stop_sequence == trip.stop_times[i - 1].stop_sequence) {
          throw ValueError("trip '" + trip.trip_id + "': duplicate stop_sequence " +
                           std::to_string(trip.stop_times[i].stop_sequence));
        }
        if (trip.stop_times[i].arrival < trip.stop_times[i - 1].departure) {
          throw ValueError("trip '" + trip.trip_id + "': stop times decrease at sequence " +
                           std::to_string(trip.stop_times[i].stop_sequence));
        }
      }
    }
  }

  if (has_calendar) {
    const csv::Table t = csv::read_file((dir / "calendar.txt").string());
    const std::size_t c_service = t.column("service_id");
    const std::size_t cols[7] = {t.column("monday"),   t.column("tuesday"),
                                 t.column("wednesday"), t.column("thursday"),
                                 t.column("friday"),   t.column("saturday"),
                                 t.column("sunday")};
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      Service s;
      s.service_id = t.rows[r][c_service];
      for (int d = 0; d < 7; ++d) s.active[d] = csv::to_int(t, r, cols[d]) != 0;
      feed.services.push_back(std::move(s));
    }
  } else {
    // calendar_dates only: a service runs on the weekdays of its added dates.
    const csv::Table t = csv::read_file((dir / "calendar_dates.txt").string());
    const std::size_t c_service = t.column("service_id");
    const std::size_t c_date = t.column("date");
    const std::size_t c_type = t.column("exception_type");
    std::map<std::string, Service> services;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (csv::to_int(t, r, c_type) != 1) continue;
      Service& s = services[t.rows[r][c_service]];
      s.service_id = t.rows[r][c_service];
      s.active[weekday_of_yyyymmdd(csv::to_int(t, r, c_date))] = true;
    }
    for (auto& [_, s] : services) feed.services.push_back(std::move(s));
  }
  std::sort(feed.services.begin(), feed.services.end(),
            [](const Service& a, const Service& b) { return a.service_id < b.service_id; });

  return feed;
}

void write_feed(const GtfsFeed& feed, const std::string& directory) {
  const fs::path dir(directory);
  fs::create_directories(dir);

  std::vector<std::vector<std::string>> stop_rows;
  for (const Stop& s : feed.stops) {
    char lat[32], lon[32];
    std::snprintf(lat, sizeof(lat), "%.17g", s.lat);
    std::snprintf(lon, sizeof(lon), "%.17g", s.lon);
    stop_rows.push_back({s.stop_id, s.name, lat, lon});
  }
  csv::write_file((dir / "stops.txt").string(), {"stop_id", "stop_name", "stop_lat", "stop_lon"},
                  stop_rows);

  std::vector<std::vector<std::string>> trip_rows;
  std::vector<std::vector<std::string>> stop_time_rows;
  for (const Trip& trip : feed.trips) {
    trip_rows.push_back({trip.route_id, trip.service_id, trip.trip_id});
    for (const StopTime& st : trip.stop_times) {
      stop_time_rows.push_back({trip.trip_id, format_gtfs_time(st.arrival),
                                format_gtfs_time(st.departure), feed.stops[st.stop].stop_id,
                                std::to_string(st.stop_sequence)});
    }
  }
  csv::write_file((dir / "trips.txt").string(), {"route_id", "service_id", "trip_id"}, trip_rows);
  csv::write_file((dir / "stop_times.txt").string(),
                  {"trip_id", "arrival_time", "departure_time", "stop_id", "stop_sequence"},
                  stop_time_rows);

  std::vector<std::vector<std::string>> service_rows;
  for (const Service& s : feed.services) {
    std::vector<std::string> row = {s.service_id};
    for (int d = 0; d < 7; ++d) row.push_back(s.active[d] ? "1" : "0");
    row.push_back("19000101");
    row.push_back("30000101");
    service_rows.push_back(std::move(row));
  }
  csv::write_file((dir / "calendar.txt").string(),
                  {"service_id", "monday", "tuesday", "wednesday", "thursday", "friday",
                   "saturday", "sunday", "start_date", "end_date"},
                  service_rows);
}

FleetSnapshot positions_at(const GtfsFeed& feed, Weekday weekday, std::int64_t time_seconds) {
  if (time_seconds < 0 || time_seconds >= 28 * 3600) {
    throw ContractError("positions_at: time must be within [0, 28h)");
  }
  FleetSnapshot snap;
  snap.weekday = weekday;
  snap.time = time_seconds;

  for (const Trip& trip : feed.trips) {
    if (trip.stop_times.empty()) continue;
    if (!feed.service_active(trip.service_id, weekday)) continue;
    if (time_seconds < trip.stop_times.front().arrival ||
        time_seconds > trip.stop_times.back().departure) {
      continue;
    }

    BusPosition pos;
    pos.trip_id = trip.trip_id;
    bool placed = false;
    for (std::size_t i = 0; i < trip.stop_times.size() && !placed; ++i) {
      const StopTime& st = trip.stop_times[i];
      const Stop& stop = feed.stops[st.stop];
      if (time_seconds >= st.arrival && time_seconds <= st.departure) {
        // Dwell window (or exact scheduled time): pinned at the stop.
        pos.lat = stop.lat;
        pos.lon = stop.lon;
        pos.prev_stop = stop.stop_id;
        pos.next_stop = (i + 1 < trip.stop_times.size())
                            ? feed.stops[trip.stop_times[i + 1].stop].stop_id
                            : stop.stop_id;
        pos.fraction = 0.0;
        placed = true;
      } else if (i + 1 < trip.stop_times.size() && time_seconds > st.departure &&
                 time_seconds < trip.stop_times[i + 1].arrival) {
        const StopTime& next = trip.stop_times[i + 1];
        const Stop& next_stop = feed.stops[next.stop];
        const double span = static_cast<double>(next.arrival - st.departure);
        const double f = static_cast<double>(time_seconds - st.departure) / span;
        pos.lat = stop.lat + f * (next_stop.lat - stop.lat);
        pos.lon = stop.lon + f * (next_stop.lon - stop.lon);
        pos.prev_stop = stop.stop_id;
        pos.next_stop = next_stop.stop_id;
        pos.fraction = f;
        placed = true;
      }
    }
    if (placed) snap.buses.push_back(std::move(pos));
  }
  return snap;
}

namespace {

struct Projector {
  double lat0 = 0.0, lon0 = 0.0, cos_lat0 = 1.0;

  explicit Projector(const Network& net) {
    double sx = 0.0, sy = 0.0;
    for (const Node& n : net.nodes()) {
      sx += n.x;
      sy += n.y;
    }
    const double count = std::max<std::size_t>(1, net.nodes().size());
    lon0 = sx / count;
    lat0 = sy / count;
    cos_lat0 = std::cos(lat0 * kPi / 180.0);
    if (std::abs(cos_lat0) < 1e-6) cos_lat0 = 1e-6;
  }

  // Equirectangular about the centroid. Affine, so fractions along segments
  // are preserved; for already-planar small-extent data it is near-identity
  // up to uniform scale.
  void to_plane(double lon, double lat, double& px, double& py) const {
    px = (lon - lon0) * cos_lat0;
    py = lat - lat0;
  }
};

}  // namespace

std::vector<BusPlacement> snap_to_network(const FleetSnapshot& snapshot, const Network& net,
                                          int default_capacity) {
  if (net.nodes().empty() || net.links().empty()) {
    throw ContractError("snap_to_network: network has no links");
  }
  const Projector proj(net);

  std::vector<std::pair<double, double>> node_xy(net.nodes().size());
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    proj.to_plane(net.nodes()[i].x, net.nodes()[i].y, node_xy[i].first, node_xy[i].second);
  }

  std::vector<BusPlacement> placements;
  placements.reserve(snapshot.buses.size());
  for (const BusPosition& bus : snapshot.buses) {
    double bx, by;
    proj.to_plane(bus.lon, bus.lat, bx, by);

    constexpr double kEps = 1e-9;
    double best_dist2 = std::numeric_limits<double>::infinity();
    LinkIndex best_link = -1;
    double best_frac = 0.0;
    for (std::size_t li = 0; li < net.links().size(); ++li) {
      const Link& l = net.links()[li];
      const auto [ax, ay] = node_xy[l.from];
      const auto [cx, cy] = node_xy[l.to];
      const double vx = cx - ax, vy = cy - ay;
      const double len2 = vx * vx + vy * vy;
      double t = 0.0;
      if (len2 > 0.0) t = std::clamp(((bx - ax) * vx + (by - ay) * vy) / len2, 0.0, 1.0);
      const double dx = ax + t * vx - bx, dy = ay + t * vy - by;
      const double d2 = dx * dx + dy * dy;
      if (d2 + kEps < best_dist2) {  // strict improvement; ties keep lowest link_id
        best_dist2 = d2;
        best_link = static_cast<LinkIndex>(li);
        best_frac = t;
      }
    }

    // A bus coinciding with a node is re-expressed as the start of that
    // node's lowest-id outgoing link.
    NodeIndex at_node = -1;
    double node_dist2 = std::numeric_limits<double>::infinity();
    for (std::size_t ni = 0; ni < node_xy.size(); ++ni) {
      const double dx = node_xy[ni].first - bx, dy = node_xy[ni].second - by;
      const double d2 = dx * dx + dy * dy;
      if (d2 < node_dist2) {
        node_dist2 = d2;
        at_node = static_cast<NodeIndex>(ni);
      }
    }

    BusPlacement p;
    p.bus_id = bus.trip_id;
    p.capacity = default_capacity;
    p.onboard = bus.occupancy;
    if (node_dist2 <= best_dist2 + kEps && !net.outgoing(at_node).empty()) {
      const LinkIndex li = *std::min_element(
          net.outgoing(at_node).begin(), net.outgoing(at_node).end(),
          [&](LinkIndex a, LinkIndex b) { return net.links()[a].link_id < net.links()[b].link_id; });
      p.link_id = net.links()[li].link_id;
      p.time_to_travel = net.links()[li].travel_time;
    } else {
      const Link& l = net.links()[best_link];
      p.link_id = l.link_id;
      p.time_to_travel =
          Duration::from_minutes((1.0 - best_frac) * l.travel_time.minutes());
      if (p.time_to_travel.tenths() <= 0 && best_frac < 1.0) {
        p.time_to_travel = Duration::from_tenths(1);
      }
      if (p.time_to_travel > l.travel_time) p.time_to_travel = l.travel_time;
    }
    placements.push_back(std::move(p));
  }
  return placements;
}

}  // namespace evac::gtfs
