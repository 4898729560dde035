#include "wsnsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "text.hpp"

namespace wsnsim {

double distance(Location a, Location b) { return std::sqrt(distance_sq(a, b)); }

std::string node_token(NodeId id) {
  if (id == kBaseStation) return "BS";
  if (id == kBroadcast) return "*";
  return std::to_string(id);
}

void LocationTable::add(NodeId id, Location loc) {
  if (id > kMaxSensorId) throw ConfigError("node id " + std::to_string(id) + " is reserved");
  if (!entries_.emplace(id, loc).second) {
    throw ConfigError("duplicate node id " + std::to_string(id));
  }
}

Location LocationTable::at(NodeId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw ConfigError("unknown node id " + std::to_string(id));
  return it->second;
}

std::set<NodeId> LocationTable::ids() const {
  std::set<NodeId> out;
  for (const auto& [id, loc] : entries_) out.insert(id);
  return out;
}

void RegionParams::validate() const {
  if (!(band_halfwidth > 0)) throw ConfigError("band half-width must be positive");
  if (!(vertical_extent > 0)) throw ConfigError("vertical extent must be positive");
  if (max_neighbours < 1) throw ConfigError("max neighbours must be at least 1");
  if (!(radio_range > 0)) throw ConfigError("radio range must be positive");
}

const NeighbourRow* NeighbourTable::find(NodeId id) const {
  auto it = rows.find(id);
  return it == rows.end() ? nullptr : &it->second;
}

NeighbourTable compute_neighbour_table(const LocationTable& locs, const RegionParams& params,
                                       const std::set<NodeId>& alive) {
  if (locs.empty()) throw ConfigError("location table is empty");
  params.validate();
  for (NodeId id : alive) {
    if (!locs.contains(id)) throw ConfigError("alive node " + std::to_string(id) + " has no location");
  }

  const Location bs = locs.base_station();
  const double range_sq = params.radio_range * params.radio_range;

  NeighbourTable table;
  table.width = params.max_neighbours;

  struct Candidate {
    double bs_dist_sq;
    NodeId id;
  };
  std::vector<Candidate> candidates;

  for (NodeId u : alive) {
    const Location lu = locs.at(u);
    const double u_bs = distance_sq(lu, bs);
    candidates.clear();
    for (NodeId v : alive) {
      if (v == u) continue;
      const Location lv = locs.at(v);
      if (std::abs(lv.x - lu.x) > params.band_halfwidth) continue;
      if (std::abs(lv.y - lu.y) > params.vertical_extent) continue;
      const double v_bs = distance_sq(lv, bs);
      if (!(v_bs < u_bs)) continue;
      if (distance_sq(lu, lv) > range_sq) continue;
      candidates.push_back({v_bs, v});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.bs_dist_sq != b.bs_dist_sq ? a.bs_dist_sq < b.bs_dist_sq : a.id < b.id;
    });
    if (candidates.size() > params.max_neighbours) candidates.resize(params.max_neighbours);

    if (!candidates.empty()) {
      std::vector<NodeId> ids;
      ids.reserve(candidates.size());
      for (const auto& c : candidates) ids.push_back(c.id);
      table.rows.emplace(u, NeighbourRow::of(std::move(ids)));
    } else if (u_bs <= range_sq) {
      table.rows.emplace(u, NeighbourRow::direct());
    } else {
      table.rows.emplace(u, NeighbourRow::isolated());
    }
  }
  return table;
}

NeighbourTable compute_neighbour_table(const LocationTable& locs, const RegionParams& params) {
  return compute_neighbour_table(locs, params, locs.ids());
}

NeighbourTable refresh_table(const NeighbourTable& table, const LocationTable& locs,
                             const RegionParams& params, const std::set<NodeId>& dead) {
  std::set<NodeId> alive;
  for (const auto& [id, loc] : locs.entries()) {
    if (!dead.count(id)) alive.insert(id);
  }
  RegionParams p = params;
  p.max_neighbours = table.width;
  return compute_neighbour_table(locs, p, alive);
}

LocationTable parse_location_file(std::string_view content) {
  LocationTable table;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(content)) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto parts = text::split(line, ',');
    if (parts.size() != 3) throw ParseError(line_no, "expected `id , x , y`");
    const auto id = text::to_int<NodeId>(parts[0]);
    if (!id) throw ParseError(line_no, "node id is not a non-negative integer");
    const auto x = text::to_double(parts[1]);
    const auto y = text::to_double(parts[2]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
      throw ParseError(line_no, "coordinate is not numeric");
    }
    if (*x < 0 || *y < 0) throw ParseError(line_no, "negative coordinate");
    if (table.contains(*id)) throw ParseError(line_no, "duplicate node id " + std::to_string(*id));
    try {
      table.add(*id, {*x, *y});
    } catch (const ConfigError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return table;
}

std::string emit_location_file(const LocationTable& locs) {
  std::string out;
  char buf[96];
  for (const auto& [id, loc] : locs.entries()) {
    std::snprintf(buf, sizeof buf, "%u , %.3f , %.3f\n", id, loc.x, loc.y);
    out += buf;
  }
  return out;
}

std::string emit_neighbour_table(const NeighbourTable& table) {
  std::string out;
  for (const auto& [id, row] : table.rows) {
    out += std::to_string(id);
    for (std::size_t col = 0; col < table.width; ++col) {
      out += '\t';
      switch (row.kind) {
        case NeighbourRow::Kind::Direct:
          out += '0';
          break;
        case NeighbourRow::Kind::Isolated:
          out += '-';
          break;
        case NeighbourRow::Kind::Neighbours:
          out += col < row.neighbours.size() ? std::to_string(row.neighbours[col]) : "-";
          break;
      }
    }
    out += '\n';
  }
  return out;
}

NeighbourTable parse_neighbour_table(std::string_view content) {
  NeighbourTable table;
  bool width_known = false;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(content)) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    const auto cols = text::fields(raw);
    if (cols.size() < 2) throw ParseError(line_no, "row needs an id and at least one column");
    if (!width_known) {
      table.width = cols.size() - 1;
      width_known = true;
    } else if (cols.size() - 1 != table.width) {
      throw ParseError(line_no, "row width differs from the first row");
    }
    const auto id = text::to_int<NodeId>(cols[0]);
    if (!id) throw ParseError(line_no, "bad node id");

    const auto marker_cols = std::span(cols).subspan(1);
    const bool all_dash = std::all_of(marker_cols.begin(), marker_cols.end(),
                                      [](std::string_view c) { return c == "-"; });
    const bool all_zero = std::all_of(marker_cols.begin(), marker_cols.end(),
                                      [](std::string_view c) { return c == "0"; });
    NeighbourRow row;
    if (all_dash) {
      row = NeighbourRow::isolated();
    } else if (all_zero) {
      row = NeighbourRow::direct();
    } else {
      std::vector<NodeId> ids;
      bool padding = false;
      for (std::string_view c : marker_cols) {
        if (c == "-") {
          padding = true;
          continue;
        }
        if (padding) throw ParseError(line_no, "neighbour id after padding");
        const auto n = text::to_int<NodeId>(c);
        if (!n) throw ParseError(line_no, "bad neighbour id");
        if (std::find(ids.begin(), ids.end(), *n) != ids.end()) {
          throw ParseError(line_no, "repeated neighbour id");
        }
        ids.push_back(*n);
      }
      row = NeighbourRow::of(std::move(ids));
    }
    if (!table.rows.emplace(*id, std::move(row)).second) {
      throw ParseError(line_no, "duplicate row for node " + std::to_string(*id));
    }
  }
  return table;
}

}  // namespace wsnsim
