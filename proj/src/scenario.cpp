#include "wsnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "text.hpp"

namespace wsnsim {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Hyb:
      return "hyb";
    case Protocol::Aodv:
      return "aodv";
    case Protocol::Dsr:
      return "dsr";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  name = text::trim(name);
  if (name == "hyb") return Protocol::Hyb;
  if (name == "aodv") return Protocol::Aodv;
  if (name == "dsr") return Protocol::Dsr;
  throw ConfigError("unknown protocol '" + std::string(name) + "' (expected hyb, aodv or dsr)");
}

void Scenario::validate() const {
  if (!(topology_width > 0) || !(topology_height > 0)) throw ConfigError("topology size must be positive");
  if (!locations && node_count < 1) throw ConfigError("node_count must be at least 1");
  if (!(sim_time > 0)) throw ConfigError("sim_time must be positive");
  if (!(traffic.rate >= 0) || !std::isfinite(traffic.rate)) throw ConfigError("traffic.rate must be non-negative");
  if (traffic.packet_size == 0) throw ConfigError("traffic.packet_size must be positive");
  if (!(sensing_radius >= 0)) throw ConfigError("sensing_radius must be non-negative");
  if (control_frame_bits == 0) throw ConfigError("control_frame_bits must be positive");
  if (bs_location.x < 0 || bs_location.y < 0 || bs_location.x > topology_width ||
      bs_location.y > topology_height) {
    throw ConfigError("base station lies outside the topology");
  }
  radio.validate();
  energy.coefficients.validate();
  if (!(energy.initial > 0) || !(energy.threshold >= 0)) throw ConfigError("energy levels invalid");
  RegionParams r = region;
  r.radio_range = radio.radio_range;
  r.validate();
  if (!(hyb.wait_t > 0) || !(hyb.dedup_ttl > 0) || !(hyb.refresh_period > 0)) {
    throw ConfigError("hyb timers must be positive");
  }
  if (!(baseline.discovery_timeout > 0) || !(baseline.retry_backoff >= 0) || !(baseline.broadcast_jitter >= 0)) {
    throw ConfigError("baseline timers invalid");
  }
  for (const auto& e : scripted_events) {
    if (!(e.time >= 0)) throw ConfigError("scripted event time must be non-negative");
  }
}

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

double need_double(std::string_view v) {
  auto d = text::to_double(v);
  if (!d) throw ConfigError("expected a number, got '" + std::string(v) + "'");
  return *d;
}

template <typename Int>
Int need_int(std::string_view v) {
  auto i = text::to_int<Int>(v);
  if (!i) throw ConfigError("expected a non-negative integer, got '" + std::string(v) + "'");
  return *i;
}

Location need_point(std::string_view v, char sep = ',') {
  const auto parts = text::split(v, sep);
  if (parts.size() != 2) throw ConfigError("expected X" + std::string(1, sep) + "Y, got '" + std::string(v) + "'");
  return {need_double(parts[0]), need_double(parts[1])};
}

struct Field {
  std::string key;
  std::function<std::string(const Scenario&)> get;
  std::function<void(Scenario&, std::string_view)> set;
};

template <typename T>
Field real(std::string key, T Scenario::*outer, double T::*member) {
  return {std::move(key), [=](const Scenario& s) { return fmt_double(s.*outer.*member); },
          [=](Scenario& s, std::string_view v) { s.*outer.*member = need_double(v); }};
}

Field real(std::string key, double Scenario::*member) {
  return {std::move(key), [=](const Scenario& s) { return fmt_double(s.*member); },
          [=](Scenario& s, std::string_view v) { s.*member = need_double(v); }};
}

template <typename T, typename Int>
Field integer(std::string key, T Scenario::*outer, Int T::*member) {
  return {std::move(key), [=](const Scenario& s) { return std::to_string(s.*outer.*member); },
          [=](Scenario& s, std::string_view v) { s.*outer.*member = need_int<Int>(v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"topology_size",
                 [](const Scenario& s) { return fmt_double(s.topology_width) + "x" + fmt_double(s.topology_height); },
                 [](Scenario& s, std::string_view v) {
                   const Location p = need_point(v, 'x');
                   s.topology_width = p.x;
                   s.topology_height = p.y;
                 }});
    f.push_back({"node_count", [](const Scenario& s) { return std::to_string(s.node_count); },
                 [](Scenario& s, std::string_view v) { s.node_count = need_int<std::uint32_t>(v); }});
    f.push_back({"placement", [](const Scenario& s) { return s.placement; },
                 [](Scenario& s, std::string_view v) { s.placement = std::string(v); }});
    f.push_back({"bs_location",
                 [](const Scenario& s) { return fmt_double(s.bs_location.x) + "," + fmt_double(s.bs_location.y); },
                 [](Scenario& s, std::string_view v) { s.bs_location = need_point(v); }});
    f.push_back(real("sim_time", &Scenario::sim_time));
    f.push_back(real("traffic.rate", &Scenario::traffic, &TrafficParams::rate));
    f.push_back(integer("traffic.packet_size", &Scenario::traffic, &TrafficParams::packet_size));
    f.push_back(real("sensing_radius", &Scenario::sensing_radius));
    f.push_back(real("radio.path_loss_exponent", &Scenario::radio, &RadioParams::path_loss_exponent));
    f.push_back(real("radio.reference_distance", &Scenario::radio, &RadioParams::reference_distance));
    f.push_back(real("radio.reception_threshold", &Scenario::radio, &RadioParams::reception_threshold));
    f.push_back(real("radio.radio_range", &Scenario::radio, &RadioParams::radio_range));
    f.push_back(real("radio.bandwidth", &Scenario::radio, &RadioParams::bandwidth));
    f.push_back({"energy.elec", [](const Scenario& s) { return fmt_double(s.energy.coefficients.elec); },
                 [](Scenario& s, std::string_view v) { s.energy.coefficients.elec = need_double(v); }});
    f.push_back({"energy.amp", [](const Scenario& s) { return fmt_double(s.energy.coefficients.amp); },
                 [](Scenario& s, std::string_view v) { s.energy.coefficients.amp = need_double(v); }});
    f.push_back(real("energy.initial", &Scenario::energy, &EnergyParams::initial));
    f.push_back(real("energy.threshold", &Scenario::energy, &EnergyParams::threshold));
    f.push_back({"protocol", [](const Scenario& s) { return std::string(to_string(s.protocol)); },
                 [](Scenario& s, std::string_view v) { s.protocol = parse_protocol(v); }});
    f.push_back({"seed", [](const Scenario& s) { return std::to_string(s.seed); },
                 [](Scenario& s, std::string_view v) { s.seed = need_int<std::uint64_t>(v); }});
    f.push_back(real("region.band_halfwidth", &Scenario::region, &RegionParams::band_halfwidth));
    f.push_back(real("region.vertical_extent", &Scenario::region, &RegionParams::vertical_extent));
    f.push_back(integer("region.max_neighbours", &Scenario::region, &RegionParams::max_neighbours));
    f.push_back(real("hyb.wait_t", &Scenario::hyb, &HybParams::wait_t));
    f.push_back(real("hyb.dedup_ttl", &Scenario::hyb, &HybParams::dedup_ttl));
    f.push_back(real("hyb.refresh_period", &Scenario::hyb, &HybParams::refresh_period));
    f.push_back({"hyb.liveness",
                 [](const Scenario& s) {
                   return std::string(s.hyb.liveness == Liveness::Reported ? "reported" : "ground_truth");
                 },
                 [](Scenario& s, std::string_view v) {
                   if (v == "ground_truth") {
                     s.hyb.liveness = Liveness::GroundTruth;
                   } else if (v == "reported") {
                     s.hyb.liveness = Liveness::Reported;
                   } else {
                     throw ConfigError("hyb.liveness must be ground_truth or reported");
                   }
                 }});
    f.push_back(real("baseline.discovery_timeout", &Scenario::baseline, &BaselineParams::discovery_timeout));
    f.push_back(integer("baseline.discovery_retries", &Scenario::baseline, &BaselineParams::discovery_retries));
    f.push_back(integer("baseline.data_retries", &Scenario::baseline, &BaselineParams::data_retries));
    f.push_back(real("baseline.retry_backoff", &Scenario::baseline, &BaselineParams::retry_backoff));
    f.push_back(real("baseline.broadcast_jitter", &Scenario::baseline, &BaselineParams::broadcast_jitter));
    f.push_back({"control_frame_bits", [](const Scenario& s) { return std::to_string(s.control_frame_bits); },
                 [](Scenario& s, std::string_view v) { s.control_frame_bits = need_int<std::uint32_t>(v); }});
    f.push_back({"scripted_events",
                 [](const Scenario& s) {
                   std::string out;
                   for (const auto& e : s.scripted_events) {
                     if (!out.empty()) out += "; ";
                     out += fmt_double(e.time) + "@" + fmt_double(e.where.x) + "," + fmt_double(e.where.y);
                   }
                   return out;
                 },
                 [](Scenario& s, std::string_view v) {
                   s.scripted_events.clear();
                   for (std::string_view item : text::split(v, ';')) {
                     item = text::trim(item);
                     if (item.empty()) continue;
                     const auto at = item.find('@');
                     if (at == std::string_view::npos) throw ConfigError("scripted event needs TIME@X,Y");
                     s.scripted_events.push_back({need_double(item.substr(0, at)), need_point(item.substr(at + 1))});
                   }
                 }});
    return f;
  }();
  return table;
}

}  // namespace

Scenario parse_scenario(std::string_view content, const std::filesystem::path& base_dir) {
  Scenario s;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(content)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected `key = value`");
    const std::string_view key = text::trim(line.substr(0, eq));
    const std::string_view value = text::trim(line.substr(eq + 1));
    const auto& table = fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    try {
      it->set(s, value);
    } catch (const ConfigError& e) {
      throw ParseError(line_no, std::string(key) + ": " + e.what());
    }
  }
  if (s.placement != "uniform" && !base_dir.empty()) {
    std::filesystem::path p(s.placement);
    if (p.is_relative()) s.placement = (base_dir / p).string();
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string emit_scenario(const Scenario& s) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(s) + "\n";
  return out;
}

std::vector<EnvEvent> generate_events(const Scenario& s, Rng& rng) {
  std::vector<EnvEvent> events;
  if (s.traffic.rate > 0) {
    // k / rate rather than repeated addition keeps the grid exact
    const auto count = static_cast<std::uint64_t>(std::floor(s.sim_time * s.traffic.rate + 1e-9));
    events.reserve(count + s.scripted_events.size());
    for (std::uint64_t k = 0; k < count; ++k) {
      const double t = static_cast<double>(k) / s.traffic.rate;
      const double x = rng.uniform(0.0, s.topology_width);
      const double y = rng.uniform(0.0, s.topology_height);
      events.push_back({0, t, {x, y}});
    }
  }
  for (const auto& e : s.scripted_events) events.push_back({0, e.time, e.where});
  std::stable_sort(events.begin(), events.end(), [](const EnvEvent& a, const EnvEvent& b) { return a.time < b.time; });
  EventId next = 1;
  for (auto& e : events) e.id = next++;
  return events;
}

std::vector<NodeId> sensing_nodes(Location where, double radius, const LocationTable& locs,
                                  const std::vector<NodeId>& alive) {
  std::vector<NodeId> out;
  const double r2 = radius * radius;
  for (NodeId id : alive) {
    if (distance_sq(locs.at(id), where) <= r2) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

LocationTable place_nodes(const Scenario& s, Rng& rng) {
  LocationTable table;
  if (s.locations) {
    table = *s.locations;
  } else if (s.placement != "uniform") {
    std::ifstream in(s.placement);
    if (!in) throw ConfigError("cannot open location file " + s.placement);
    std::stringstream buf;
    buf << in.rdbuf();
    table = parse_location_file(buf.str());
  } else {
    for (NodeId id = 0; id < s.node_count; ++id) {
      const double x = rng.uniform(0.0, s.topology_width);
      const double y = rng.uniform(0.0, s.topology_height);
      table.add(id, {x, y});
    }
  }
  table.set_base_station(s.bs_location);
  return table;
}

}  // namespace wsnsim
