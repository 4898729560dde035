// wsnsim: command-line front end for the simulator.
//
//   wsnsim run <scenario> [--protocol P] [--seed S] [--log PATH] [--out PATH]
//   wsnsim compare <scenario> --protocols hyb,aodv,dsr --seeds 1,2,3 [--nodes 25,50] --out DIR [--check]
//   wsnsim neighbours <location-file> --bs X,Y [--M 250] [--N inf] [--K 3] [--range 350]
//   wsnsim gen-topology --nodes N --size WxH --seed S [--out PATH]
//
// Exit status: 0 success, 1 usage, 2 run failure, 3 dominance check failed.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wsnsim/compare.hpp"
#include "wsnsim/engine.hpp"
#include "wsnsim/topology.hpp"

namespace {

using namespace wsnsim;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

Location parse_xy(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("expected X,Y but got '" + s + "'");
  try {
    std::size_t used = 0;
    const double x = std::stod(s.substr(0, comma), &used);
    const double y = std::stod(s.substr(comma + 1));
    return {x, y};
  } catch (const std::exception&) {
    throw ConfigError("expected X,Y but got '" + s + "'");
  }
}

void print_report(const MetricsReport& m) {
  std::printf("execution_time_s  %.6f\n", m.execution_time);
  std::printf("avg_hop_count     %.6f\n", m.avg_hop_count);
  std::printf("collisions        %llu\n", static_cast<unsigned long long>(m.collisions));
  std::printf("signals           %llu\n", static_cast<unsigned long long>(m.signals));
  std::printf("generated         %llu\n", static_cast<unsigned long long>(m.generated));
  std::printf("delivered         %llu\n", static_cast<unsigned long long>(m.delivered));
  std::printf("dropped           %llu (asleep %llu, duplicate %llu, no_route %llu, congestion %llu)\n",
              static_cast<unsigned long long>(m.dropped_total()),
              static_cast<unsigned long long>(m.dropped_for(DropReason::Asleep)),
              static_cast<unsigned long long>(m.dropped_for(DropReason::Duplicate)),
              static_cast<unsigned long long>(m.dropped_for(DropReason::NoRoute)),
              static_cast<unsigned long long>(m.dropped_for(DropReason::Congestion)));
  std::printf("energy_consumed_j %.9f\n", m.energy_consumed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless sensor network routing simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  std::string run_scenario, run_protocol, run_log, run_out;
  std::uint64_t run_seed = 0;
  run->add_option("scenario", run_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--protocol", run_protocol, "hyb, aodv or dsr (overrides the scenario)");
  auto* seed_opt = run->add_option("--seed", run_seed, "RNG seed (overrides the scenario)");
  run->add_option("--log", run_log, "Write the event log here");
  run->add_option("--out", run_out, "Write a one-row runs CSV here");

  auto* cmp = app.add_subcommand("compare", "Run protocols over seeds and write CSV tables");
  std::string cmp_scenario, cmp_out;
  std::vector<std::string> cmp_protocols;
  std::vector<std::uint64_t> cmp_seeds;
  std::vector<std::uint32_t> cmp_nodes;
  unsigned cmp_threads = 0;
  bool cmp_check = false;
  cmp->add_option("scenario", cmp_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmp->add_option("--protocols", cmp_protocols, "Comma-separated protocols")->required()->delimiter(',');
  cmp->add_option("--seeds", cmp_seeds, "Comma-separated seeds")->required()->delimiter(',');
  cmp->add_option("--nodes", cmp_nodes, "Comma-separated node counts")->delimiter(',');
  cmp->add_option("--out", cmp_out, "Output directory")->required();
  cmp->add_option("--threads", cmp_threads, "Worker threads (default: all cores)");
  cmp->add_flag("--check", cmp_check, "Exit 3 unless HYB dominates the baselines");

  auto* nb = app.add_subcommand("neighbours", "Print the neighbour table for a location file");
  std::string nb_file, nb_bs;
  RegionParams region;
  nb->add_option("locations", nb_file, "Location file")->required()->check(CLI::ExistingFile);
  nb->add_option("--bs", nb_bs, "Base station X,Y")->required();
  nb->add_option("--M", region.band_halfwidth, "Band half-width")->capture_default_str();
  nb->add_option("--N", region.vertical_extent, "Vertical extent")->capture_default_str();
  nb->add_option("--K", region.max_neighbours, "Neighbours per row")->capture_default_str();
  nb->add_option("--range", region.radio_range, "Radio range")->capture_default_str();

  auto* gen = app.add_subcommand("gen-topology", "Emit a random location file");
  std::uint32_t gen_nodes = 0;
  std::string gen_size, gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--nodes", gen_nodes, "Number of nodes")->required();
  gen->add_option("--size", gen_size, "Field size WxH")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      Scenario s = load_scenario(run_scenario);
      if (!run_protocol.empty()) s.protocol = parse_protocol(run_protocol);
      if (*seed_opt) s.seed = run_seed;
      RunResult r = Simulator(s).run();
      if (!run_log.empty()) write_file(run_log, format_log(r.log));
      if (!run_out.empty()) {
        RunRow row{s.protocol, static_cast<std::uint32_t>(r.locations.size()), s.seed, r.report, r.wall_seconds};
        write_file(run_out, runs_csv({row}));
      }
      print_report(r.report);
      for (const auto& v : r.violations) std::fprintf(stderr, "invariant violated: %s\n", v.c_str());
      return r.violations.empty() ? 0 : 2;
    }

    if (*cmp) {
      Scenario s = load_scenario(cmp_scenario);
      CompareOptions opt;
      for (const auto& p : cmp_protocols) opt.protocols.push_back(parse_protocol(p));
      opt.seeds = cmp_seeds;
      opt.node_counts = cmp_nodes;
      opt.threads = cmp_threads;
      ComparisonTable table = compare(s, opt);
      std::filesystem::create_directories(cmp_out);
      write_file(std::filesystem::path(cmp_out) / "runs.csv", runs_csv(table.runs));
      const std::string summary = summary_csv(table.summary);
      write_file(std::filesystem::path(cmp_out) / "summary.csv", summary);
      std::fputs(summary.c_str(), stdout);
      if (cmp_check) {
        const DominanceCheck check = check_dominance(table);
        for (const auto& f : check.failures) std::fprintf(stderr, "dominance failed: %s\n", f.c_str());
        if (!check.ok) return 3;
      }
      return 0;
    }

    if (*nb) {
      LocationTable locs = parse_location_file(read_file(nb_file));
      locs.set_base_station(parse_xy(nb_bs));
      std::fputs(emit_neighbour_table(compute_neighbour_table(locs, region)).c_str(), stdout);
      return 0;
    }

    if (*gen) {
      Scenario s;
      const auto x = gen_size.find('x');
      if (x == std::string::npos) throw ConfigError("--size expects WxH");
      try {
        s.topology_width = std::stod(gen_size.substr(0, x));
        s.topology_height = std::stod(gen_size.substr(x + 1));
      } catch (const std::exception&) {
        throw ConfigError("--size expects WxH");
      }
      s.node_count = gen_nodes;
      s.seed = gen_seed;
      s.bs_location = {s.topology_width / 2, s.topology_height / 2};
      s.validate();
      Rng rng(gen_seed, "placement");
      const std::string text = emit_location_file(place_nodes(s, rng));
      if (gen_out.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        write_file(gen_out, text);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n%s", e.what(), app.help().c_str());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
