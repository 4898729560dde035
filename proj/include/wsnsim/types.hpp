#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace wsnsim {

using NodeId = std::uint32_t;
using EventId = std::uint64_t;

// Reserved ids; sensor ids never take these values.
inline constexpr NodeId kBaseStation = std::numeric_limits<NodeId>::max();
inline constexpr NodeId kBroadcast = kBaseStation - 1;
inline constexpr NodeId kMaxSensorId = kBaseStation - 2;

struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

inline double distance_sq(Location a, Location b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Location a, Location b);

/// Invalid scenario, parameters or topology detected before a run starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Renders a node id for logs and tables ("BS", "*" or the decimal id).
std::string node_token(NodeId id);

}  // namespace wsnsim
