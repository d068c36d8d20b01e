#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vanetsim/metric_policy.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/radio.hpp"
#include "vanetsim/router.hpp"

namespace vanetsim {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Full experiment description. Key names carry their units; parsing rejects
// unknown keys. All speeds are accepted in km/h and converted once on use.
struct ScenarioConfig {
  std::vector<int> node_counts{60, 70, 90};
  std::vector<double> stopped_fractions{0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<Protocol> protocols{Protocol::Aomdv, Protocol::SdAomdv, Protocol::SsdAomdv};

  double area_width_m{2000.0};
  double area_height_m{2000.0};
  double block_size_m{250.0};
  double sim_duration_s{400.0};

  double speed_min_kmh{10.0};
  double speed_max_kmh{90.0};
  double speed_delta_kmh{20.0};
  double turn_prob_straight{0.50};
  double turn_prob_left{0.25};
  double turn_prob_right{0.25};
  double mobility_step_s{0.25};

  double stop_interval_s{60.0};
  double stop_duration_s{20.0};
  double min_stop_duration_s{5.0};
  double stop_history_window_s{0.0};  // 0 = entire history

  double range_m{250.0};
  double bitrate_bps{2e6};
  double broadcast_jitter_max_ms{10.0};
  double loss_probability{0.0};
  double link_failure_delay_ms{50.0};

  int flow_count{20};
  double flow_rate_pps{4.0};
  int flow_payload_bytes{512};
  double flow_start_window_s{10.0};

  double route_lifetime_s{3.0};
  int rreq_retries{2};
  double rreq_timeout_s{1.0};
  bool direction_filter_rreq{false};
  bool zero_metric_fields{false};

  MobilityParams mobility_params() const {
    MobilityParams p;
    p.v_min_mps = speed_min_kmh / 3.6;
    p.v_max_mps = speed_max_kmh / 3.6;
    p.speed_delta_mps = speed_delta_kmh / 3.6;
    p.p_straight = turn_prob_straight;
    p.p_left = turn_prob_left;
    p.p_right = turn_prob_right;
    p.min_stop_duration = Duration::from_seconds(min_stop_duration_s);
    p.stop_history_window = Duration::from_seconds(stop_history_window_s);
    return p;
  }

  RadioConfig radio_config() const {
    RadioConfig r;
    r.range_m = range_m;
    r.bitrate_bps = static_cast<std::int64_t>(bitrate_bps);
    r.broadcast_jitter_max = Duration::from_seconds(broadcast_jitter_max_ms / 1e3);
    r.loss_probability = loss_probability;
    r.link_failure_delay = Duration::from_seconds(link_failure_delay_ms / 1e3);
    return r;
  }

  RouterConfig router_config() const {
    RouterConfig r;
    r.route_lifetime = Duration::from_seconds(route_lifetime_s);
    r.rreq_retries = rreq_retries;
    r.rreq_timeout = Duration::from_seconds(rreq_timeout_s);
    r.direction_filter_rreq = direction_filter_rreq;
    r.zero_metric_fields = zero_metric_fields;
    return r;
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0)) throw ConfigError(std::string(name) + " must be positive");
    };
    if (node_counts.empty()) throw ConfigError("node_counts is empty");
    for (int n : node_counts)
      if (n < 2) throw ConfigError("node_counts entries must be >= 2");
    if (stopped_fractions.empty()) throw ConfigError("stopped_fractions is empty");
    for (double f : stopped_fractions)
      if (f < 0.0 || f > 1.0) throw ConfigError("stopped_fractions entries must be in [0,1]");
    if (seeds.empty()) throw ConfigError("seeds is empty");
    if (protocols.empty()) throw ConfigError("protocols is empty");
    positive(area_width_m, "area_width_m");
    positive(area_height_m, "area_height_m");
    positive(block_size_m, "block_size_m");
    for (double v : {area_width_m, area_height_m}) {
      const double q = v / block_size_m;
      if (std::abs(q - std::round(q)) > 1e-9)
        throw ConfigError("area dimensions must be whole multiples of block_size_m");
    }
    positive(sim_duration_s, "sim_duration_s");
    positive(speed_min_kmh, "speed_min_kmh");
    if (speed_max_kmh < speed_min_kmh)
      throw ConfigError("speed_max_kmh must be >= speed_min_kmh");
    positive(speed_delta_kmh, "speed_delta_kmh");
    if (turn_prob_straight < 0 || turn_prob_left < 0 || turn_prob_right < 0)
      throw ConfigError("turn probabilities must be non-negative");
    const double turn_sum = turn_prob_straight + turn_prob_left + turn_prob_right;
    if (std::abs(turn_sum - 1.0) > 1e-9)
      throw ConfigError("turn probabilities must sum to 1");
    positive(mobility_step_s, "mobility_step_s");
    positive(stop_interval_s, "stop_interval_s");
    positive(stop_duration_s, "stop_duration_s");
    if (stop_duration_s >= stop_interval_s)
      throw ConfigError("stop_duration_s must be < stop_interval_s");
    if (min_stop_duration_s < 0) throw ConfigError("min_stop_duration_s must be >= 0");
    if (stop_history_window_s < 0) throw ConfigError("stop_history_window_s must be >= 0");
    positive(range_m, "range_m");
    positive(bitrate_bps, "bitrate_bps");
    if (broadcast_jitter_max_ms < 0) throw ConfigError("broadcast_jitter_max_ms must be >= 0");
    if (loss_probability < 0.0 || loss_probability >= 1.0)
      throw ConfigError("loss_probability must be in [0,1)");
    if (link_failure_delay_ms < 0) throw ConfigError("link_failure_delay_ms must be >= 0");
    if (flow_count < 0) throw ConfigError("flow_count must be >= 0");
    for (int n : node_counts)
      if (static_cast<long long>(flow_count) > static_cast<long long>(n) * (n - 1))
        throw ConfigError("flow_count exceeds available source-destination pairs");
    positive(flow_rate_pps, "flow_rate_pps");
    if (flow_payload_bytes <= 0 || flow_payload_bytes > 65535)
      throw ConfigError("flow_payload_bytes must be in [1,65535]");
    positive(flow_start_window_s, "flow_start_window_s");
    positive(route_lifetime_s, "route_lifetime_s");
    if (rreq_retries < 0) throw ConfigError("rreq_retries must be >= 0");
    positive(rreq_timeout_s, "rreq_timeout_s");
  }
};

namespace config_detail {

// Shortest decimal form that parses back to exactly the same double.
inline std::string round_trip_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + v + "'");
  return d;
}

inline long long parse_int(const std::string& v, int line) {
  const double d = parse_double(v, line);
  if (d != std::floor(d))
    throw ConfigError("line " + std::to_string(line) + ": expected integer, got '" + v + "'");
  return static_cast<long long>(d);
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("line " + std::to_string(line) + ": bad boolean '" + v + "'");
}

}  // namespace config_detail

// Applies `key = value` lines onto `cfg`. '#' starts a comment; lists are
// comma-separated. Unknown keys are rejected with their line number.
inline void apply_config_text(ScenarioConfig& cfg, const std::string& text) {
  using namespace config_detail;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    auto trim = [](std::string t) {
      const auto tb = t.find_first_not_of(" \t\r");
      const auto te = t.find_last_not_of(" \t\r");
      return tb == std::string::npos ? std::string() : t.substr(tb, te - tb + 1);
    };
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));

    auto as_double = [&](double& out) { out = parse_double(value, line); };
    auto as_int = [&](int& out) { out = static_cast<int>(parse_int(value, line)); };
    auto as_bool = [&](bool& out) { out = parse_bool(value, line); };

    if (key == "node_counts") {
      cfg.node_counts.clear();
      for (const auto& item : split_list(value))
        cfg.node_counts.push_back(static_cast<int>(parse_int(item, line)));
    } else if (key == "stopped_fractions") {
      cfg.stopped_fractions.clear();
      for (const auto& item : split_list(value))
        cfg.stopped_fractions.push_back(parse_double(item, line));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& item : split_list(value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(item, line)));
    } else if (key == "protocols") {
      cfg.protocols.clear();
      for (const auto& item : split_list(value)) {
        const auto p = parse_protocol(item);
        if (!p)
          throw ConfigError("line " + std::to_string(line) + ": unknown protocol '" +
                            item + "'");
        cfg.protocols.push_back(*p);
      }
    } else if (key == "area_width_m") as_double(cfg.area_width_m);
    else if (key == "area_height_m") as_double(cfg.area_height_m);
    else if (key == "block_size_m") as_double(cfg.block_size_m);
    else if (key == "sim_duration_s") as_double(cfg.sim_duration_s);
    else if (key == "speed_min_kmh") as_double(cfg.speed_min_kmh);
    else if (key == "speed_max_kmh") as_double(cfg.speed_max_kmh);
    else if (key == "speed_delta_kmh") as_double(cfg.speed_delta_kmh);
    else if (key == "turn_prob_straight") as_double(cfg.turn_prob_straight);
    else if (key == "turn_prob_left") as_double(cfg.turn_prob_left);
    else if (key == "turn_prob_right") as_double(cfg.turn_prob_right);
    else if (key == "mobility_step_s") as_double(cfg.mobility_step_s);
    else if (key == "stop_interval_s") as_double(cfg.stop_interval_s);
    else if (key == "stop_duration_s") as_double(cfg.stop_duration_s);
    else if (key == "min_stop_duration_s") as_double(cfg.min_stop_duration_s);
    else if (key == "stop_history_window_s") as_double(cfg.stop_history_window_s);
    else if (key == "range_m") as_double(cfg.range_m);
    else if (key == "bitrate_bps") as_double(cfg.bitrate_bps);
    else if (key == "broadcast_jitter_max_ms") as_double(cfg.broadcast_jitter_max_ms);
    else if (key == "loss_probability") as_double(cfg.loss_probability);
    else if (key == "link_failure_delay_ms") as_double(cfg.link_failure_delay_ms);
    else if (key == "flow_count") as_int(cfg.flow_count);
    else if (key == "flow_rate_pps") as_double(cfg.flow_rate_pps);
    else if (key == "flow_payload_bytes") as_int(cfg.flow_payload_bytes);
    else if (key == "flow_start_window_s") as_double(cfg.flow_start_window_s);
    else if (key == "route_lifetime_s") as_double(cfg.route_lifetime_s);
    else if (key == "rreq_retries") as_int(cfg.rreq_retries);
    else if (key == "rreq_timeout_s") as_double(cfg.rreq_timeout_s);
    else if (key == "direction_filter_rreq") as_bool(cfg.direction_filter_rreq);
    else if (key == "zero_metric_fields") as_bool(cfg.zero_metric_fields);
    else
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  apply_config_text(cfg, text);
  return cfg;
}

inline ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// Canonical echo of the effective configuration; feeding it back through the
// parser reproduces the exact same configuration.
inline std::string config_to_text(const ScenarioConfig& cfg) {
  using config_detail::round_trip_double;
  std::ostringstream out;
  auto list_ints = [&](const char* key, const auto& values) {
    out << key << " = ";
    for (std::size_t i = 0; i < values.size(); ++i)
      out << (i ? "," : "") << values[i];
    out << "\n";
  };
  out << "node_counts = ";
  for (std::size_t i = 0; i < cfg.node_counts.size(); ++i)
    out << (i ? "," : "") << cfg.node_counts[i];
  out << "\n";
  out << "stopped_fractions = ";
  for (std::size_t i = 0; i < cfg.stopped_fractions.size(); ++i)
    out << (i ? "," : "") << round_trip_double(cfg.stopped_fractions[i]);
  out << "\n";
  list_ints("seeds", cfg.seeds);
  out << "protocols = ";
  for (std::size_t i = 0; i < cfg.protocols.size(); ++i)
    out << (i ? "," : "") << to_string(cfg.protocols[i]);
  out << "\n";
  auto kv = [&](const char* key, double v) {
    out << key << " = " << round_trip_double(v) << "\n";
  };
  kv("area_width_m", cfg.area_width_m);
  kv("area_height_m", cfg.area_height_m);
  kv("block_size_m", cfg.block_size_m);
  kv("sim_duration_s", cfg.sim_duration_s);
  kv("speed_min_kmh", cfg.speed_min_kmh);
  kv("speed_max_kmh", cfg.speed_max_kmh);
  kv("speed_delta_kmh", cfg.speed_delta_kmh);
  kv("turn_prob_straight", cfg.turn_prob_straight);
  kv("turn_prob_left", cfg.turn_prob_left);
  kv("turn_prob_right", cfg.turn_prob_right);
  kv("mobility_step_s", cfg.mobility_step_s);
  kv("stop_interval_s", cfg.stop_interval_s);
  kv("stop_duration_s", cfg.stop_duration_s);
  kv("min_stop_duration_s", cfg.min_stop_duration_s);
  kv("stop_history_window_s", cfg.stop_history_window_s);
  kv("range_m", cfg.range_m);
  kv("bitrate_bps", cfg.bitrate_bps);
  kv("broadcast_jitter_max_ms", cfg.broadcast_jitter_max_ms);
  kv("loss_probability", cfg.loss_probability);
  kv("link_failure_delay_ms", cfg.link_failure_delay_ms);
  out << "flow_count = " << cfg.flow_count << "\n";
  kv("flow_rate_pps", cfg.flow_rate_pps);
  out << "flow_payload_bytes = " << cfg.flow_payload_bytes << "\n";
  kv("flow_start_window_s", cfg.flow_start_window_s);
  kv("route_lifetime_s", cfg.route_lifetime_s);
  out << "rreq_retries = " << cfg.rreq_retries << "\n";
  kv("rreq_timeout_s", cfg.rreq_timeout_s);
  out << "direction_filter_rreq = " << (cfg.direction_filter_rreq ? "true" : "false") << "\n";
  out << "zero_metric_fields = " << (cfg.zero_metric_fields ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace vanetsim
