#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/radio.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

enum class Protocol { Hyb, Aodv, Dsr };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

/// How a HYB node decides whether a neighbour is alive between refreshes,
/// and how the base station decides who is dead at a refresh.
enum class Liveness { GroundTruth, Reported };

struct TrafficParams {
  double rate = 8.0;               // environmental events per second (CBR)
  std::uint32_t packet_size = 512;  // bytes
};

struct EnergyParams {
  EnergyCoefficients coefficients;
  double initial = 10.0;      // J
  double threshold = 1.0e-6;  // J
};

struct HybParams {
  double wait_t = 0.1;           // s
  double dedup_ttl = 5.0;        // s
  double refresh_period = 30.0;  // s
  Liveness liveness = Liveness::GroundTruth;
};

struct BaselineParams {
  double discovery_timeout = 1.0;    // s
  std::uint32_t discovery_retries = 2;
  std::uint32_t data_retries = 3;
  double retry_backoff = 0.01;       // s, multiplied by the attempt number
  double broadcast_jitter = 0.01;    // s, upper bound of the rebroadcast delay
};

struct ScriptedEvent {
  double time = 0.0;
  Location where;
};

/// One run's configuration. Defaults are the Table-1 parameter set with a
/// 5-minute simulated duration and the base station at the centre.
struct Scenario {
  double topology_width = 2000.0;
  double topology_height = 2000.0;
  std::uint32_t node_count = 25;
  std::string placement = "uniform";  // "uniform" or a location-file path
  Location bs_location{1000.0, 1000.0};
  double sim_time = 300.0;
  TrafficParams traffic;
  double sensing_radius = 250.0;
  RadioParams radio;
  EnergyParams energy;
  Protocol protocol = Protocol::Hyb;
  std::uint64_t seed = 1;
  RegionParams region;
  HybParams hyb;
  BaselineParams baseline;
  std::uint32_t control_frame_bits = 320;
  std::vector<ScriptedEvent> scripted_events;

  /// Explicit placement; takes precedence over `placement` when set.
  std::optional<LocationTable> locations;

  std::uint64_t payload_bits() const { return std::uint64_t{traffic.packet_size} * 8; }

  /// Throws ConfigError.
  void validate() const;
};

/// `key = value` lines, `#` comments. Relative placement paths are resolved
/// against `base_dir`. Unknown keys and bad values throw ParseError.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Every key with its current value, in parse_scenario's format.
std::string emit_scenario(const Scenario& s);

struct EnvEvent {
  EventId id = 0;
  double time = 0.0;
  Location where;
};

/// CBR environmental events over [0, sim_time) at uniformly random points,
/// merged with the scripted ones and numbered from 1 in time order.
std::vector<EnvEvent> generate_events(const Scenario& s, Rng& rng);

/// Ids of the nodes in `alive` within `radius` of `where`, ascending.
std::vector<NodeId> sensing_nodes(Location where, double radius, const LocationTable& locs,
                                  const std::vector<NodeId>& alive);

/// Scenario locations: explicit table, location file, or seeded uniform
/// placement over the topology rectangle. The base station is set from
/// bs_location.
LocationTable place_nodes(const Scenario& s, Rng& rng);

}  // namespace wsnsim
