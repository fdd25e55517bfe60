#ifndef EVAC_GTFS_HPP_
#define EVAC_GTFS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evac/network.hpp"
#include "evac/scenario_types.hpp"

namespace evac::gtfs {

enum class Weekday { monday, tuesday, wednesday, thursday, friday, saturday, sunday };

Weekday parse_weekday(const std::string& name);
std::string weekday_name(Weekday d);

// "HH:MM:SS" to seconds after midnight; hours may exceed 24 for
// after-midnight service.
std::int64_t parse_gtfs_time(const std::string& text);
std::string format_gtfs_time(std::int64_t seconds);

struct Stop {
  std::string stop_id;
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
};

struct StopTime {
  std::int64_t arrival = 0;    // seconds after midnight
  std::int64_t departure = 0;
  std::int32_t stop = -1;      // index into stops
  std::int64_t stop_sequence = 0;
};

struct Trip {
  std::string trip_id;
  std::string route_id;
  std::string service_id;
  std::vector<StopTime> stop_times;  // sorted by stop_sequence
};

struct Service {
  std::string service_id;
  std::array<bool, 7> active = {};  // indexed by Weekday
};

struct GtfsFeed {
  std::vector<Stop> stops;       // sorted by stop_id
  std::vector<Trip> trips;       // sorted by trip_id
  std::vector<Service> services; // sorted by service_id

  std::optional<std::int32_t> find_stop(const std::string& stop_id) const;
  bool service_active(const std::string& service_id, Weekday day) const;
};

// Reads stops.txt, trips.txt, stop_times.txt and calendar.txt (or
// calendar_dates.txt) from a directory. Missing files and malformed rows
// raise SchemaError / ValueError with file and line context.
GtfsFeed parse_feed(const std::string& directory);

// Writes the typed feed back out; parse_feed(write_feed(feed)) == feed.
void write_feed(const GtfsFeed& feed, const std::string& directory);

struct BusPosition {
  std::string trip_id;
  double lat = 0.0;
  double lon = 0.0;
  std::string prev_stop;
  std::string next_stop;
  double fraction = 0.0;  // schedule fraction along the segment; 0 at a dwell
  int occupancy = 0;
};

struct FleetSnapshot {
  Weekday weekday = Weekday::monday;
  std::int64_t time = 0;  // seconds after midnight
  std::vector<BusPosition> buses;
};

// Schedule interpolation: a bus sits at a stop during its dwell window and
// moves in a straight line between consecutive stops proportionally to
// elapsed schedule time. Trips not active at (weekday, time) are excluded.
FleetSnapshot positions_at(const GtfsFeed& feed, Weekday weekday, std::int64_t time_seconds);

// Maps each snapshot bus onto the nearest directed link (point-to-segment
// distance under an equirectangular projection about the network centroid).
// time_to_arrive is the unrun fraction of the link times its travel time.
// Distance ties take the lowest link_id; a bus sitting exactly on a node is
// placed at the start of that node's lowest-id outgoing link.
std::vector<BusPlacement> snap_to_network(const FleetSnapshot& snapshot, const Network& net,
                                          int default_capacity);

}  // namespace evac::gtfs

#endif  // EVAC_GTFS_HPP_
