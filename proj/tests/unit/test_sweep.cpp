#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fdcrn/detector.hpp"
#include "fdcrn/lossmodel.hpp"
#include "fdcrn/sweep.hpp"

using namespace fdcrn;
using namespace fdcrn::sweep;

namespace {

// Short horizon and few replications: fast, still exercises every path.
ExperimentSpec quick_spec() {
  auto spec = parse_config(
      "horizon_s = 20\n"
      "replications = 3\n"
      "snr_db = 0:10:30\n"
      "variants = 0.001:0.1:20e6, 0.002:0.2:85e6\n");
  spec.finalize();
  return spec;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

int count_of(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("default spec") {
  const auto spec = default_spec();
  CHECK(spec.traffic.n_packets == 100);
  CHECK(spec.traffic.packet_len_bits == 8192.0);
  CHECK(spec.traffic.lambda_p == 2.0);
  CHECK(spec.traffic.lambda_s == 5.0);
  CHECK(spec.samples == 5);
  CHECK(spec.traffic.delay_bound_s == doctest::Approx(spec.traffic.burst_duration() / 2.0));
  REQUIRE(spec.snr_grid_db.size() == 16);
  CHECK(spec.snr_grid_db.front() == 0.0);
  CHECK(spec.snr_grid_db.back() == 30.0);
  CHECK(spec.modes.size() == 3);
  CHECK(spec.variants.size() == 8);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("config parsing") {
  auto spec = parse_config(
      "# comment line\n"
      "lambda_p = 0.5   # trailing comment\n"
      "\n"
      "  modes = half, full \n"
      "snr_db = 1, 2.5, 7\n"
      "delay_bound_fraction = 0.25\n"
      "seed = 18446744073709551615\n"
      "output_path = out/x.csv\n");
  spec.finalize();
  CHECK(spec.traffic.lambda_p == 0.5);
  REQUIRE(spec.modes.size() == 2);
  CHECK(spec.modes[1] == sim::DuplexMode::FullDuplexPerfect);
  CHECK(spec.snr_grid_db == std::vector<double>{1.0, 2.5, 7.0});
  CHECK(spec.traffic.delay_bound_s == doctest::Approx(0.25 * spec.traffic.burst_duration()));
  CHECK(spec.base_seed == 18446744073709551615ULL);
  CHECK(spec.output_path == "out/x.csv");

  CHECK(parse_snr_grid("0:2:30").size() == 16);
  CHECK(parse_snr_grid("0:0.1:1").size() == 11);

  auto explicit_d = parse_config("delay_bound_s = 0.03\n");
  explicit_d.finalize();
  CHECK(explicit_d.traffic.delay_bound_s == 0.03);

  const auto v = parse_config("variants = 0.001:0.1:20e6\n").variants;
  REQUIRE(v.size() == 1);
  CHECK(v[0].label() == "ed1mm_ea0.1_w20MHz");
}

TEST_CASE("config errors name the field") {
  const auto field_of = [](const std::string& text) {
    try {
      auto spec = parse_config(text);
      spec.finalize();
      spec.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of("lambda_p = abc\n") == "lambda_p");
  CHECK(field_of("lambda_s = -2\n") == "lambda_s");
  CHECK(field_of("colour = blue\n") == "colour");
  CHECK(field_of("modes =\n") == "modes");
  CHECK(field_of("modes = half, half\n") == "modes");
  CHECK(field_of("modes = quarter\n") == "modes");
  CHECK(field_of("snr_db = 3, 1\n") == "snr_db");
  CHECK(field_of("snr_db =\n") == "snr_db");
  CHECK(field_of("replications = 0\n") == "replications");
  CHECK(field_of("m = 1\n") == "m");
  CHECK(field_of("p_fa = 1\n") == "p_fa");
  CHECK(field_of("variants = 1:2\n") == "variants");
  CHECK(field_of("snr_db = -4:2:10\n") == "snr_db");
  CHECK(field_of("snr_db = -4:2:10\nmodes = half,full\n") == "<none>");
  CHECK(field_of("just some words\n") == "line 1");
  CHECK(field_of("n_packets = 2.5\n") == "n_packets");
}

TEST_CASE("invalid spec is rejected before any output") {
  auto spec = quick_spec();
  spec.modes.clear();
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("sweep rows: layout, ranges and pass-through of analytic values") {
  const auto spec = quick_spec();
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 4 * (1 + 1 + 2));

  const double beta = detector::threshold_for_false_alarm(5, 0.1);
  for (const auto& r : rows) {
    CHECK(r.loss_sim_mean >= 0.0);
    CHECK(r.loss_sim_mean <= 1.0);
    CHECK(r.loss_sim_ci95 >= 0.0);
    CHECK(r.replications == 3);
    CHECK(r.p_md >= 0.0);
    CHECK(r.p_md <= 1.0);
    if (r.mode == sim::DuplexMode::FullDuplexPerfect) {
      const double p = detector::pmd_perfect({5, beta, std::pow(10.0, r.snr_db / 10.0)});
      CHECK(r.p_md == p);
      CHECK(r.loss_analytic == lossmodel::loss_full_duplex(p));
    }
    if (r.mode == sim::DuplexMode::HalfDuplex) {
      CHECK(r.loss_analytic == lossmodel::loss_half_duplex(spec.traffic, r.p_md));
    }
  }
  CHECK(rows[0].snr_db == 0.0);
  CHECK(rows[0].mode == sim::DuplexMode::HalfDuplex);
  CHECK(rows[2].variant == "ed1mm_ea0.1_w20MHz");
  CHECK(rows[3].variant == "ed2mm_ea0.2_w85MHz");

  auto single = spec;
  single.snr_grid_db = {30.0};
  single.modes = {sim::DuplexMode::FullDuplexPerfect};
  const auto one = run_sweep(single);
  REQUIRE(one.size() == 1);
  CHECK(one[0].loss_analytic ==
        lossmodel::loss_full_duplex(detector::pmd_perfect({5, beta, 1000.0})));
}

TEST_CASE("default preset: perfect full duplex analytic loss below half duplex from 10 dB") {
  auto spec = default_spec();
  spec.replications = 1;
  spec.traffic.horizon_s = 1.0;
  const auto rows = run_sweep(spec);
  std::map<double, double> half;
  for (const auto& r : rows) {
    if (r.mode == sim::DuplexMode::HalfDuplex) half[r.snr_db] = r.loss_analytic;
  }
  for (const auto& r : rows) {
    if (r.mode != sim::DuplexMode::FullDuplexPerfect || r.snr_db < 10.0) continue;
    CAPTURE(r.snr_db);
    CHECK(r.loss_analytic <= half.at(r.snr_db));
  }
}

TEST_CASE("sweep output is reproducible") {
  const auto spec = quick_spec();
  const auto a = to_csv(run_sweep(spec));
  SweepOptions threaded;
  threaded.threads = 3;
  const auto b = to_csv(run_sweep(spec, threaded));
  CHECK(a == b);
  auto reseeded = spec;
  reseeded.base_seed = 2;
  CHECK(to_csv(run_sweep(reseeded)) != a);
}

TEST_CASE("csv format and round trip") {
  const auto rows = run_sweep(quick_spec());
  const auto text = to_csv(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');

  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].snr_db == rows[i].snr_db);
    CHECK(back[i].mode == rows[i].mode);
    CHECK(back[i].variant == rows[i].variant);
    CHECK(back[i].p_md == rows[i].p_md);
    CHECK(back[i].loss_analytic == rows[i].loss_analytic);
    CHECK(back[i].loss_sim_mean == rows[i].loss_sim_mean);
    CHECK(back[i].loss_sim_ci95 == rows[i].loss_sim_ci95);
    CHECK(back[i].seed == rows[i].seed);
  }
  CHECK(to_csv(back) == text);

  std::istringstream bad("snr_db,mode\n1,half\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
  std::istringstream short_row(std::string(kCsvHeader) + "\n1,half,none\n");
  CHECK_THROWS_AS(read_csv(short_row), ConfigError);

  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(30.0) == "30");
}

TEST_CASE("plot script") {
  SweepRow a;
  a.mode = sim::DuplexMode::HalfDuplex;
  a.variant = "none";
  a.loss_analytic = 0.5;
  SweepRow b = a;
  b.snr_db = 2.0;
  SweepRow c = a;
  c.mode = sim::DuplexMode::FullDuplexPerfect;
  const auto two = plot_script({a, b, c});
  CHECK(count_of(two, "title '") == 2);
  CHECK(two.find("set logscale y") != std::string::npos);
  CHECK(count_of(two, "<< EOD") == 2);

  auto full = run_sweep(quick_spec());
  const auto script = plot_script(full);
  CHECK(count_of(script, "title '") == 4);
  CHECK(script.find("full-imperfect ed2mm_ea0.2_w85MHz") != std::string::npos);

  CHECK_THROWS_AS(plot_script({}), std::invalid_argument);

  const auto dir = std::filesystem::temp_directory_path() / "fdcrn_plot_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "empty.gp").string();
  std::filesystem::remove(path);
  CHECK_THROWS(emit_plot_script({}, path));
  CHECK_FALSE(std::filesystem::exists(path));
  CHECK_THROWS_AS(emit_plot_script(full, (dir / "missing" / "x.gp").string()), IoError);
  CHECK_THROWS_AS(read_csv_file((dir / "missing.csv").string()), IoError);
  CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), IoError);
}
