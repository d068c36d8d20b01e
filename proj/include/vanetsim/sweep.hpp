#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/simulation.hpp"

namespace vanetsim {

// All result files use exactly 6 significant digits; unset ratios print as
// "nan" so downstream tooling cannot mistake them for measured zeros.
inline std::string fmt_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string fmt_g6(const std::optional<double>& v) {
  return v ? fmt_g6(*v) : "nan";
}

struct AggregateRow {
  std::string protocol;
  double percent_stopped{0.0};
  std::optional<double> mean_delay_s;
  std::optional<double> pdf;
  std::optional<double> nrl;
};

struct SweepResult {
  std::vector<RunReport> rows;       // canonical order
  std::vector<AggregateRow> aggregate;
  std::size_t failed_runs{0};
};

inline std::vector<RunParams> enumerate_runs(const ScenarioConfig& cfg) {
  std::vector<RunParams> runs;
  for (Protocol protocol : cfg.protocols)
    for (int nodes : cfg.node_counts)
      for (double fraction : cfg.stopped_fractions)
        for (std::uint64_t seed : cfg.seeds)
          runs.push_back(RunParams{protocol, nodes, fraction, seed});
  return runs;
}

inline RunReport execute_run(const ScenarioConfig& cfg, const RunParams& params) {
  try {
    Simulation sim(cfg, params);
    return sim.run();
  } catch (const std::exception& e) {
    RunReport r;
    r.protocol = to_string(params.protocol);
    r.node_count = params.node_count;
    r.percent_stopped = params.stopped_fraction * 100.0;
    r.seed = params.seed;
    r.failed = true;
    r.error = e.what();
    return r;
  }
}

// Mean over the defined values only; empty input stays undefined.
inline std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

// Per (protocol, fraction): first average over seeds within each node-count
// scenario, then average the scenario means.
inline std::vector<AggregateRow> aggregate_rows(const ScenarioConfig& cfg,
                                                const std::vector<RunReport>& rows) {
  std::vector<AggregateRow> out;
  for (Protocol protocol : cfg.protocols) {
    const std::string label = to_string(protocol);
    for (double fraction : cfg.stopped_fractions) {
      const double percent = fraction * 100.0;
      std::vector<std::optional<double>> delay_means, pdf_means, nrl_means;
      for (int nodes : cfg.node_counts) {
        std::vector<std::optional<double>> delays, pdfs, nrls;
        for (const auto& r : rows) {
          if (r.failed || r.protocol != label || r.node_count != nodes ||
              std::abs(r.percent_stopped - percent) > 1e-9)
            continue;
          delays.push_back(r.mean_delay_s);
          pdfs.push_back(r.pdf);
          nrls.push_back(r.nrl);
        }
        delay_means.push_back(mean_of(delays));
        pdf_means.push_back(mean_of(pdfs));
        nrl_means.push_back(mean_of(nrls));
      }
      AggregateRow row;
      row.protocol = label;
      row.percent_stopped = percent;
      row.mean_delay_s = mean_of(delay_means);
      row.pdf = mean_of(pdf_means);
      row.nrl = mean_of(nrl_means);
      out.push_back(std::move(row));
    }
  }
  return out;
}

inline SweepResult run_sweep(const ScenarioConfig& cfg, unsigned jobs) {
  cfg.validate();
  const auto runs = enumerate_runs(cfg);
  std::vector<RunReport> rows(runs.size());
  jobs = std::max(1u, jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      rows[i] = execute_run(cfg, runs[i]);
    }
  };
  if (jobs == 1 || runs.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, runs.size()); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.rows = std::move(rows);
  for (const auto& r : result.rows)
    if (r.failed) ++result.failed_runs;
  result.aggregate = aggregate_rows(cfg, result.rows);
  return result;
}

// --- file emission ----------------------------------------------------

inline constexpr const char* kRawHeader =
    "protocol,node_count,percent_stopped,seed,mean_delay_s,pdf,nrl,sent,received,control_tx";

inline std::string raw_csv_text(const std::vector<RunReport>& rows) {
  std::ostringstream out;
  out << kRawHeader << "\n";
  for (const auto& r : rows) {
    out << r.protocol << "," << r.node_count << "," << fmt_g6(r.percent_stopped) << ","
        << r.seed << ",";
    if (r.failed) {
      out << "nan,nan,nan,0,0,0\n";
      continue;
    }
    out << fmt_g6(r.mean_delay_s) << "," << fmt_g6(r.pdf) << "," << fmt_g6(r.nrl) << ","
        << r.packets_sent << "," << r.packets_received << "," << r.control_transmissions
        << "\n";
  }
  return out.str();
}

inline std::string aggregate_csv_text(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "protocol,percent_stopped,mean_delay_s,pdf,nrl\n";
  for (const auto& r : rows)
    out << r.protocol << "," << fmt_g6(r.percent_stopped) << "," << fmt_g6(r.mean_delay_s)
        << "," << fmt_g6(r.pdf) << "," << fmt_g6(r.nrl) << "\n";
  return out.str();
}

// One plot series per protocol, x = percent stopped; mirrors the three
// figure files consumed by plotting.
inline std::string fig_csv_text(const std::vector<AggregateRow>& rows,
                                const ScenarioConfig& cfg,
                                std::optional<double> AggregateRow::* metric) {
  std::vector<double> percents;
  for (double f : cfg.stopped_fractions) percents.push_back(f * 100.0);
  std::sort(percents.begin(), percents.end());
  percents.erase(std::unique(percents.begin(), percents.end()), percents.end());

  std::ostringstream out;
  out << "percent_stopped,aomdv,sd_aomdv,ssd_aomdv\n";
  const char* labels[3] = {"aomdv", "sd-aomdv", "ssd-aomdv"};
  for (double percent : percents) {
    out << fmt_g6(percent);
    for (const char* label : labels) {
      std::optional<double> value;
      for (const auto& r : rows)
        if (r.protocol == label && std::abs(r.percent_stopped - percent) < 1e-9)
          value = r.*metric;
      out << "," << fmt_g6(value);
    }
    out << "\n";
  }
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError("cannot write " + path.string());
  out << text;
}

inline void write_sweep_outputs(const std::filesystem::path& out_dir,
                                const ScenarioConfig& cfg, const SweepResult& result) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "raw_results.csv", raw_csv_text(result.rows));
  write_file(out_dir / "aggregate.csv", aggregate_csv_text(result.aggregate));
  write_file(out_dir / "fig_delay.csv",
             fig_csv_text(result.aggregate, cfg, &AggregateRow::mean_delay_s));
  write_file(out_dir / "fig_pdf.csv", fig_csv_text(result.aggregate, cfg, &AggregateRow::pdf));
  write_file(out_dir / "fig_nrl.csv", fig_csv_text(result.aggregate, cfg, &AggregateRow::nrl));
  write_file(out_dir / "effective_config.txt", config_to_text(cfg));
  if (result.failed_runs > 0) {
    std::ostringstream fail;
    for (const auto& r : result.rows)
      if (r.failed)
        fail << r.protocol << " nodes=" << r.node_count << " percent=" << r.percent_stopped
             << " seed=" << r.seed << ": " << r.error << "\n";
    write_file(out_dir / "failed_runs.txt", fail.str());
  }
}

// --- comparison -------------------------------------------------------

struct ComparisonRow {
  std::string metric;
  double baseline{0.0};
  double candidate{0.0};
  double change_percent{0.0};
  std::optional<double> reference_percent;  // published figure, when one exists
};

inline std::vector<AggregateRow> load_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open result file: " + path);
  std::vector<AggregateRow> rows;
  std::string line;
  bool header = true;
  auto field = [](const std::string& s) -> std::optional<double> {
    if (s == "nan" || s.empty()) return std::nullopt;
    return std::strtod(s.c_str(), nullptr);
  };
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ConfigError("malformed aggregate row: " + line);
    AggregateRow r;
    r.protocol = cells[0];
    r.percent_stopped = std::strtod(cells[1].c_str(), nullptr);
    r.mean_delay_s = field(cells[2]);
    r.pdf = field(cells[3]);
    r.nrl = field(cells[4]);
    rows.push_back(std::move(r));
  }
  return rows;
}

// Overall per-protocol values: mean across the percent-stopped rows.
inline std::optional<double> overall(const std::vector<AggregateRow>& rows,
                                     const std::string& protocol,
                                     std::optional<double> AggregateRow::* metric) {
  std::vector<std::optional<double>> values;
  for (const auto& r : rows)
    if (r.protocol == protocol) values.push_back(r.*metric);
  if (values.empty()) throw ConfigError("protocol not present in result file: " + protocol);
  return mean_of(values);
}

// Published overall improvement figures for the three pairings, used purely
// as printed reference points next to measured values.
inline std::optional<double> reference_change(const std::string& baseline,
                                              const std::string& candidate,
                                              const std::string& metric) {
  struct Ref {
    const char* base;
    const char* cand;
    double delay, pdf, nrl;
  };
  static constexpr Ref refs[] = {
      {"aomdv", "ssd-aomdv", 66.9, 19.5, 30.2},
      {"aomdv", "sd-aomdv", 54.0, 15.0, 27.5},
      {"sd-aomdv", "ssd-aomdv", 27.0, 3.8, 3.2},
  };
  for (const auto& r : refs) {
    if (baseline == r.base && candidate == r.cand) {
      if (metric == "delay") return r.delay;
      if (metric == "pdf") return r.pdf;
      if (metric == "nrl") return r.nrl;
    }
  }
  return std::nullopt;
}

// Delay improves downward: (baseline - candidate) / baseline. PDF and NRL
// report plain relative change: (candidate - baseline) / baseline.
inline std::vector<ComparisonRow> compare_protocols(const std::vector<AggregateRow>& rows,
                                                    const std::string& baseline,
                                                    const std::string& candidate) {
  std::vector<ComparisonRow> out;
  struct Spec {
    const char* name;
    std::optional<double> AggregateRow::* metric;
    bool improvement_down;
  };
  const Spec specs[] = {
      {"delay", &AggregateRow::mean_delay_s, true},
      {"pdf", &AggregateRow::pdf, false},
      {"nrl", &AggregateRow::nrl, false},
  };
  for (const auto& spec : specs) {
    const auto b = overall(rows, baseline, spec.metric);
    const auto c = overall(rows, candidate, spec.metric);
    if (!b || !c || *b == 0.0) continue;
    ComparisonRow row;
    row.metric = spec.name;
    row.baseline = *b;
    row.candidate = *c;
    row.change_percent =
        (spec.improvement_down ? (*b - *c) / *b : (*c - *b) / *b) * 100.0;
    row.reference_percent = reference_change(baseline, candidate, spec.name);
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string comparison_text(const std::vector<ComparisonRow>& rows,
                                   const std::string& baseline,
                                   const std::string& candidate) {
  std::ostringstream out;
  out << "candidate " << candidate << " vs baseline " << baseline << "\n";
  for (const auto& r : rows) {
    const char* verb = r.metric == "delay" ? "improved" : "changed";
    out << "  " << r.metric << ": " << fmt_g6(r.baseline) << " -> " << fmt_g6(r.candidate)
        << "  " << verb << " " << fmt_g6(r.change_percent) << "%";
    if (r.reference_percent)
      out << "  (reference: " << fmt_g6(*r.reference_percent) << "%)";
    out << "\n";
  }
  return out.str();
}

}  // namespace vanetsim
