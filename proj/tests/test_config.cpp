#include <catch2/catch_amalgamated.hpp>

#include "vanetsim/config.hpp"
#include "vanetsim/sweep.hpp"

using namespace vanetsim;

TEST_CASE("defaults mirror the experiment defaults") {
  ScenarioConfig cfg;
  cfg.validate();
  CHECK(cfg.node_counts == std::vector<int>{60, 70, 90});
  CHECK(cfg.stopped_fractions.size() == 7);
  CHECK(cfg.seeds.size() == 5);
  CHECK(cfg.protocols.size() == 3);
  CHECK(cfg.area_width_m == 2000.0);
  CHECK(cfg.area_height_m == 2000.0);
  CHECK(cfg.sim_duration_s == 400.0);
  CHECK(cfg.range_m == 250.0);
  CHECK(cfg.speed_min_kmh == 10.0);
  CHECK(cfg.speed_max_kmh == 90.0);
  CHECK(cfg.flow_count == 20);
  CHECK(cfg.flow_rate_pps == 4.0);
  CHECK(cfg.flow_payload_bytes == 512);
  CHECK(enumerate_runs(cfg).size() == 315);
}

TEST_CASE("km/h keys convert to m/s once") {
  ScenarioConfig cfg;
  cfg.speed_min_kmh = 36.0;
  cfg.speed_max_kmh = 72.0;
  const auto p = cfg.mobility_params();
  CHECK(p.v_min_mps == Catch::Approx(10.0));
  CHECK(p.v_max_mps == Catch::Approx(20.0));
}

TEST_CASE("config text applies keys and lists") {
  const std::string text = R"(
# comment line
node_counts = 10, 20
stopped_fractions = 0.25,0.5
seeds = 3
protocols = aomdv, ssd-aomdv
sim_duration_s = 100      # trailing comment
direction_filter_rreq = true
flow_count = 4
)";
  const auto cfg = parse_config_text(text);
  CHECK(cfg.node_counts == std::vector<int>{10, 20});
  CHECK(cfg.stopped_fractions == std::vector<double>{0.25, 0.5});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3});
  CHECK(cfg.protocols ==
        std::vector<Protocol>{Protocol::Aomdv, Protocol::SsdAomdv});
  CHECK(cfg.sim_duration_s == 100.0);
  CHECK(cfg.direction_filter_rreq);
  CHECK(cfg.flow_count == 4);
}

TEST_CASE("unknown keys are rejected with their line number") {
  try {
    parse_config_text("sim_duration_s = 10\nspeed_max = 50\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("speed_max") != std::string::npos);
  }
}

TEST_CASE("malformed values carry diagnostics") {
  REQUIRE_THROWS_AS(parse_config_text("sim_duration_s = abc\n"), ConfigError);
  REQUIRE_THROWS_AS(parse_config_text("flow_count = 1.5\n"), ConfigError);
  REQUIRE_THROWS_AS(parse_config_text("direction_filter_rreq = maybe\n"), ConfigError);
  REQUIRE_THROWS_AS(parse_config_text("protocols = qaomdv\n"), ConfigError);
  REQUIRE_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
}

TEST_CASE("validation rejects inconsistent scenarios") {
  ScenarioConfig cfg;
  SECTION("fractions outside [0,1]") {
    cfg.stopped_fractions = {1.5};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
  SECTION("area not a multiple of the block size") {
    cfg.area_width_m = 2100;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
  SECTION("stop duration must undercut the interval") {
    cfg.stop_duration_s = 60;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
  SECTION("too many flows for the node count") {
    cfg.node_counts = {5};
    cfg.flow_count = 21;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
  SECTION("turn probabilities must sum to one") {
    cfg.turn_prob_straight = 0.9;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
  SECTION("loss probability below one") {
    cfg.loss_probability = 1.0;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("echo round-trips the effective configuration exactly") {
  ScenarioConfig cfg;
  cfg.stopped_fractions = {0.1, 1.0 / 3.0};
  cfg.mobility_step_s = 0.125;
  cfg.flow_rate_pps = 3.7;
  cfg.protocols = {Protocol::SdAomdv};
  cfg.direction_filter_rreq = true;

  const auto text = config_to_text(cfg);
  const auto parsed = parse_config_text(text);
  CHECK(parsed.stopped_fractions == cfg.stopped_fractions);
  CHECK(parsed.mobility_step_s == cfg.mobility_step_s);
  CHECK(parsed.flow_rate_pps == cfg.flow_rate_pps);
  CHECK(parsed.protocols == cfg.protocols);
  CHECK(parsed.direction_filter_rreq == cfg.direction_filter_rreq);
  // And the echo of the echo is bytewise stable.
  CHECK(config_to_text(parsed) == text);
}

TEST_CASE("comparison arithmetic mirrors the reporting convention") {
  std::vector<AggregateRow> rows;
  AggregateRow base;
  base.protocol = "aomdv";
  base.percent_stopped = 10;
  base.mean_delay_s = 0.100;
  base.pdf = 0.5;
  base.nrl = 2.0;
  rows.push_back(base);
  AggregateRow cand = base;
  cand.protocol = "ssd-aomdv";
  cand.mean_delay_s = 0.0331;
  cand.pdf = 0.6;
  cand.nrl = 2.6;
  rows.push_back(cand);

  const auto cmp = compare_protocols(rows, "aomdv", "ssd-aomdv");
  REQUIRE(cmp.size() == 3);
  CHECK(cmp[0].metric == "delay");
  CHECK(cmp[0].change_percent == Catch::Approx(66.9));
  CHECK(cmp[0].reference_percent.has_value());
  CHECK(*cmp[0].reference_percent == Catch::Approx(66.9));
  CHECK(cmp[1].change_percent == Catch::Approx(20.0));
  CHECK(cmp[2].change_percent == Catch::Approx(30.0));

  const auto same = compare_protocols(rows, "aomdv", "aomdv");
  for (const auto& row : same) CHECK(row.change_percent == Catch::Approx(0.0));

  REQUIRE_THROWS_AS(compare_protocols(rows, "aomdv", "sd-aomdv"), ConfigError);
}

TEST_CASE("six significant digit formatting") {
  CHECK(fmt_g6(0.123456789) == "0.123457");
  CHECK(fmt_g6(1234567.0) == "1.23457e+06");
  CHECK(fmt_g6(std::optional<double>{}) == "nan");
  CHECK(fmt_g6(30.0) == "30");
}
