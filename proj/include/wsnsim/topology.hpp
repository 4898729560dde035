#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wsnsim/types.hpp"

namespace wsnsim {

/// Node placements as uploaded to the base station during configuration.
class LocationTable {
 public:
  LocationTable() = default;
  explicit LocationTable(Location base_station) : base_station_(base_station) {}

  /// Throws ConfigError on a duplicate or reserved id.
  void add(NodeId id, Location loc);

  bool contains(NodeId id) const { return entries_.count(id) != 0; }
  Location at(NodeId id) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<NodeId, Location>& entries() const { return entries_; }
  std::set<NodeId> ids() const;

  Location base_station() const { return base_station_; }
  void set_base_station(Location bs) { base_station_ = bs; }

  friend bool operator==(const LocationTable&, const LocationTable&) = default;

 private:
  std::map<NodeId, Location> entries_;
  Location base_station_{};
};

/// Shape of the eligibility band around a node and the row width.
///
/// A candidate v is in u's band when |x_v - x_u| <= band_halfwidth and
/// |y_v - y_u| <= vertical_extent. The default extent is unbounded, which
/// turns the band into a vertical strip.
struct RegionParams {
  double band_halfwidth = 250.0;
  double vertical_extent = std::numeric_limits<double>::infinity();
  std::size_t max_neighbours = 3;
  double radio_range = 350.0;

  void validate() const;
};

/// One row of the neighbour table.
struct NeighbourRow {
  enum class Kind { Neighbours, Direct, Isolated };

  Kind kind = Kind::Isolated;
  std::vector<NodeId> neighbours;  // ordered nearest-to-BS first; empty unless kind == Neighbours

  static NeighbourRow direct() { return {Kind::Direct, {}}; }
  static NeighbourRow isolated() { return {Kind::Isolated, {}}; }
  static NeighbourRow of(std::vector<NodeId> ids) { return {Kind::Neighbours, std::move(ids)}; }

  bool is_direct() const { return kind == Kind::Direct; }
  bool is_isolated() const { return kind == Kind::Isolated; }

  friend bool operator==(const NeighbourRow&, const NeighbourRow&) = default;
};

struct NeighbourTable {
  std::size_t width = 3;  // K, the number of neighbour columns when emitted
  std::map<NodeId, NeighbourRow> rows;

  const NeighbourRow* find(NodeId id) const;

  friend bool operator==(const NeighbourTable&, const NeighbourTable&) = default;
};

/// Candidate-forwarder table for every alive node, computed the way the base
/// station does it: strictly-closer-to-BS nodes inside the band and within
/// radio range, nearest to the BS first, ties by lower id, at most K kept.
///
/// Throws ConfigError on an empty location table, invalid params, or an
/// alive id that is not in `locs`.
NeighbourTable compute_neighbour_table(const LocationTable& locs, const RegionParams& params,
                                       const std::set<NodeId>& alive);

/// Same as compute_neighbour_table with every node alive.
NeighbourTable compute_neighbour_table(const LocationTable& locs, const RegionParams& params);

/// Recomputes the table without the dead nodes. The previous table only
/// contributes its row width; rows are rebuilt from the location table.
NeighbourTable refresh_table(const NeighbourTable& table, const LocationTable& locs,
                             const RegionParams& params, const std::set<NodeId>& dead);

/// Parses `id , x , y` lines. Blank lines and `#` comments are skipped.
LocationTable parse_location_file(std::string_view text);

std::string emit_location_file(const LocationTable& locs);

/// Tab-separated: id then `width` columns. Direct rows are all "0", isolated
/// rows all "-", short neighbour lists are padded with "-".
std::string emit_neighbour_table(const NeighbourTable& table);

NeighbourTable parse_neighbour_table(std::string_view text);

}  // namespace wsnsim
