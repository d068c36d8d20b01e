// Minimal library walkthrough: a short run on a small grid, then the
// resulting report and one node's routing table printed to stdout.

#include <cstdio>

#include "vanetsim/simulation.hpp"

int main() {
  using namespace vanetsim;

  ScenarioConfig cfg;
  cfg.area_width_m = 1000;
  cfg.area_height_m = 1000;
  cfg.sim_duration_s = 60;
  cfg.flow_count = 5;

  Simulation sim(cfg, RunParams{Protocol::SsdAomdv, 30, 0.3, 7});
  const RunReport report = sim.run();

  std::printf("protocol=%s nodes=%d stopped=%.0f%% seed=%llu\n", report.protocol.c_str(),
              report.node_count, report.percent_stopped,
              static_cast<unsigned long long>(report.seed));
  std::printf("sent=%llu received=%llu control_tx=%llu\n",
              static_cast<unsigned long long>(report.packets_sent),
              static_cast<unsigned long long>(report.packets_received),
              static_cast<unsigned long long>(report.control_transmissions));
  if (report.mean_delay_s)
    std::printf("mean delay %.3f ms, pdf %.3f, nrl %.3f\n", *report.mean_delay_s * 1e3,
                report.pdf.value_or(0.0), report.nrl.value_or(0.0));

  const auto& flows = sim.flows();
  if (!flows.empty()) {
    const auto& table = sim.router(flows[0].source).table();
    std::printf("node %u holds routes to %zu destinations\n", flows[0].source, table.size());
    for (const auto& [dest, entry] : table) {
      std::printf("  dest %u seq %u paths:", dest, entry.seqno);
      for (const auto& p : entry.paths)
        std::printf(" (next=%u last=%u hops=%d)", p.next_hop, p.last_hop, p.hop_count);
      std::printf("\n");
    }
  }
  return 0;
}
