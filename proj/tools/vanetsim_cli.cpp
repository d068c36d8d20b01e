// Batch front end: full sweeps with CSV emission, protocol comparisons, and
// single-run event-log dumps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "vanetsim/sweep.hpp"

namespace {

using namespace vanetsim;

struct RunFilter {
  std::vector<std::string> protocols;
  std::vector<std::uint64_t> seeds;
  std::vector<int> nodes;
  std::vector<double> fractions;
};

void apply_filter(ScenarioConfig& cfg, const RunFilter& filter) {
  if (!filter.protocols.empty()) {
    cfg.protocols.clear();
    for (const auto& label : filter.protocols) {
      const auto p = parse_protocol(label);
      if (!p) throw ConfigError("unknown protocol '" + label + "'");
      cfg.protocols.push_back(*p);
    }
  }
  if (!filter.seeds.empty()) cfg.seeds = filter.seeds;
  if (!filter.nodes.empty()) cfg.node_counts = filter.nodes;
  if (!filter.fractions.empty()) cfg.stopped_fractions = filter.fractions;
}

ScenarioConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return ScenarioConfig{};
  return load_config_file(config_path);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const RunFilter& filter, unsigned jobs) {
  ScenarioConfig cfg = load_or_default(config_path);
  apply_filter(cfg, filter);
  cfg.validate();

  const auto runs = enumerate_runs(cfg);
  std::fprintf(stderr, "running %zu simulations with %u jobs...\n", runs.size(), jobs);
  const SweepResult result = run_sweep(cfg, jobs);
  write_sweep_outputs(out_dir, cfg, result);

  std::fprintf(stderr, "wrote %s/{raw_results,aggregate,fig_delay,fig_pdf,fig_nrl}.csv\n",
               out_dir.c_str());
  if (result.failed_runs > 0) {
    std::fprintf(stderr, "%zu run(s) failed; see %s/failed_runs.txt\n", result.failed_runs,
                 out_dir.c_str());
    return 1;
  }
  return 0;
}

int cmd_compare(const std::string& result_file, const std::string& baseline,
                const std::string& candidate) {
  const auto rows = load_aggregate_csv(result_file);
  const auto comparison = compare_protocols(rows, baseline, candidate);
  std::cout << comparison_text(comparison, baseline, candidate);
  return 0;
}

int cmd_trace(const std::string& config_path, const std::string& protocol_label, int nodes,
              double fraction, std::uint64_t seed, const std::string& out_path,
              const std::string& mobility_path) {
  ScenarioConfig cfg = load_or_default(config_path);
  cfg.validate();
  const auto protocol = parse_protocol(protocol_label);
  if (!protocol) throw ConfigError("unknown protocol '" + protocol_label + "'");

  Simulation sim(cfg, RunParams{*protocol, nodes, fraction, seed});
  std::vector<std::string> events;
  std::string mobility;
  sim.collect_event_log(&events);
  if (!mobility_path.empty()) sim.collect_mobility_trace(&mobility);

  const RunReport report = sim.run();

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + out_path);
    out = &file;
  }
  for (const auto& line : events) *out << line << "\n";
  if (!mobility_path.empty()) write_file(mobility_path, mobility);

  std::fprintf(stderr, "sent=%llu received=%llu control_tx=%llu delay=%s pdf=%s nrl=%s\n",
               static_cast<unsigned long long>(report.packets_sent),
               static_cast<unsigned long long>(report.packets_received),
               static_cast<unsigned long long>(report.control_transmissions),
               fmt_g6(report.mean_delay_s).c_str(), fmt_g6(report.pdf).c_str(),
               fmt_g6(report.nrl).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AOMDV / SD-AOMDV / SSD-AOMDV routing experiments on a Manhattan grid"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "results";
  RunFilter filter;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "execute a sweep and write result tables");
  run->add_option("--config", config_path, "scenario config file");
  run->add_option("--out-dir", out_dir, "output directory");
  run->add_option("--protocols", filter.protocols, "restrict protocols")->delimiter(',');
  run->add_option("--seeds", filter.seeds, "restrict seeds")->delimiter(',');
  run->add_option("--nodes", filter.nodes, "restrict node counts")->delimiter(',');
  run->add_option("--fractions", filter.fractions, "restrict stopped fractions")
      ->delimiter(',');
  run->add_option("--jobs", jobs, "concurrent runs");

  std::string result_file, baseline = "aomdv", candidate = "ssd-aomdv";
  auto* compare = app.add_subcommand("compare", "percentage change between two protocols");
  compare->add_option("result-file", result_file, "aggregate.csv from a sweep")->required();
  compare->add_option("baseline", baseline, "baseline protocol");
  compare->add_option("candidate", candidate, "candidate protocol");

  std::string trace_protocol = "ssd-aomdv", trace_out, trace_mobility;
  int trace_nodes = 60;
  double trace_fraction = 0.4;
  std::uint64_t trace_seed = 1;
  auto* trace = app.add_subcommand("trace", "single run, dump the ordered event log");
  trace->add_option("--config", config_path, "scenario config file");
  trace->add_option("--protocol", trace_protocol, "protocol to run");
  trace->add_option("--nodes", trace_nodes, "node count");
  trace->add_option("--fraction", trace_fraction, "stopped fraction");
  trace->add_option("--seed", trace_seed, "seed");
  trace->add_option("--out", trace_out, "event log file ('-' = stdout)");
  trace->add_option("--mobility-trace", trace_mobility, "mobility sample file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, filter, jobs);
    if (compare->parsed()) return cmd_compare(result_file, baseline, candidate);
    if (trace->parsed())
      return cmd_trace(config_path, trace_protocol, trace_nodes, trace_fraction, trace_seed,
                       trace_out, trace_mobility);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
