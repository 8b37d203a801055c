#include "fdcrn/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fdcrn/detector.hpp"
#include "fdcrn/interference.hpp"

namespace fdcrn::sweep {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view field, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_int(std::string_view field, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(field), "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

InterferenceVariant parse_variant(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw ConfigError("variants", "expected eps_place_m:eps_amp_rel:bandwidth_hz, got '" +
                                      std::string(text) + "'");
  }
  return {parse_double("variants", parts[0]), parse_double("variants", parts[1]),
          parse_double("variants", parts[2])};
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string InterferenceVariant::label() const {
  return "ed" + format_number(eps_place_m * 1e3) + "mm_ea" + format_number(eps_amp_rel) + "_w" +
         format_number(bandwidth_hz / 1e6) + "MHz";
}

void ExperimentSpec::finalize() {
  if (delay_bound_fraction) traffic.delay_bound_s = *delay_bound_fraction * traffic.burst_duration();
}

void ExperimentSpec::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(traffic.lambda_p)) throw ConfigError("lambda_p", "must be > 0");
  if (!positive(traffic.lambda_s)) throw ConfigError("lambda_s", "must be > 0");
  if (traffic.n_packets <= 0) throw ConfigError("n_packets", "must be > 0");
  if (!positive(traffic.packet_len_bits)) throw ConfigError("packet_len_bits", "must be > 0");
  if (!positive(traffic.rate_bps)) throw ConfigError("rate_bps", "must be > 0");
  if (delay_bound_fraction && !positive(*delay_bound_fraction)) {
    throw ConfigError("delay_bound_fraction", "must be > 0");
  }
  if (!positive(traffic.delay_bound_s)) throw ConfigError("delay_bound_s", "must be > 0");
  if (!positive(traffic.horizon_s)) throw ConfigError("horizon_s", "must be > 0");

  if (snr_grid_db.empty()) throw ConfigError("snr_db", "grid is empty");
  for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
    if (!std::isfinite(snr_grid_db[i])) throw ConfigError("snr_db", "values must be finite");
    if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1])) {
      throw ConfigError("snr_db", "grid must be strictly increasing");
    }
  }
  if (modes.empty()) throw ConfigError("modes", "no modes selected");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (std::count(modes.begin(), modes.end(), modes[i]) > 1) {
      throw ConfigError("modes", "duplicate mode '" + std::string(sim::to_string(modes[i])) + "'");
    }
  }
  if (samples < 2) throw ConfigError("m", "must be >= 2");
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw ConfigError("p_fa", "must lie in (0, 1)");
  if (replications < 1) throw ConfigError("replications", "must be >= 1");

  const bool imperfect = std::find(modes.begin(), modes.end(),
                                   sim::DuplexMode::FullDuplexImperfect) != modes.end();
  if (imperfect) {
    if (variants.empty()) throw ConfigError("variants", "full-imperfect mode needs variants");
    if (!positive(carrier_hz)) throw ConfigError("carrier_hz", "must be > 0");
    for (const auto& v : variants) {
      if (!(v.eps_place_m >= 0.0) || !(v.eps_amp_rel >= 0.0)) {
        throw ConfigError("variants", "errors must be >= 0");
      }
      if (!(v.bandwidth_hz > 0.0) || !(v.bandwidth_hz < 2.0 * carrier_hz)) {
        throw ConfigError("variants", "bandwidth must lie in (0, 2 * carrier_hz)");
      }
    }
    if (!(ric_gain_db >= 0.0)) throw ConfigError("ric_gain_db", "must be >= 0");
    if (!(dic_gain_db >= 0.0)) throw ConfigError("dic_gain_db", "must be >= 0");
    if (snr_grid_db.front() < 0.0) {
      throw ConfigError("snr_db", "full-imperfect mode needs SNR >= 0 dB (remote power >= noise)");
    }
    if (!(local_tx_rx_dbm > noise_floor_dbm + snr_grid_db.back())) {
      throw ConfigError("local_tx_rx_dbm", "must exceed the strongest remote power in the grid");
    }
  }
}

ExperimentSpec default_spec() {
  ExperimentSpec spec;
  spec.traffic = lossmodel::TrafficConfig{};
  spec.delay_bound_fraction = 0.5;
  for (int i = 0; i <= 15; ++i) spec.snr_grid_db.push_back(2.0 * i);
  spec.modes = {sim::DuplexMode::HalfDuplex, sim::DuplexMode::FullDuplexPerfect,
                sim::DuplexMode::FullDuplexImperfect};
  for (double bw : {20e6, 85e6}) {
    for (double amp : {0.1, 0.2}) {
      for (double place : {1e-3, 2e-3}) spec.variants.push_back({place, amp, bw});
    }
  }
  spec.finalize();
  return spec;
}

std::vector<double> parse_snr_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("snr_db", "range syntax is start:step:stop");
    const double start = parse_double("snr_db", parts[0]);
    const double step = parse_double("snr_db", parts[1]);
    const double stop = parse_double("snr_db", parts[2]);
    if (!(step > 0.0)) throw ConfigError("snr_db", "range step must be > 0");
    if (stop < start) throw ConfigError("snr_db", "range stop is below start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  if (text.empty()) return grid;
  for (auto part : split(text, ',')) grid.push_back(parse_double("snr_db", part));
  return grid;
}

std::vector<sim::DuplexMode> parse_modes(std::string_view text) {
  std::vector<sim::DuplexMode> modes;
  text = trim(text);
  if (text.empty()) return modes;
  for (auto part : split(text, ',')) {
    try {
      modes.push_back(sim::parse_mode(part));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("modes", e.what());
    }
  }
  return modes;
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  value = trim(value);
  auto& t = spec.traffic;
  if (k == "lambda_p") {
    t.lambda_p = parse_double(k, value);
  } else if (k == "lambda_s") {
    t.lambda_s = parse_double(k, value);
  } else if (k == "n_packets") {
    t.n_packets = parse_int<int>(k, value);
  } else if (k == "packet_len_bits") {
    t.packet_len_bits = parse_double(k, value);
  } else if (k == "rate_bps") {
    t.rate_bps = parse_double(k, value);
  } else if (k == "delay_bound_s") {
    t.delay_bound_s = parse_double(k, value);
    spec.delay_bound_fraction.reset();
  } else if (k == "delay_bound_fraction") {
    spec.delay_bound_fraction = parse_double(k, value);
  } else if (k == "horizon_s") {
    t.horizon_s = parse_double(k, value);
  } else if (k == "snr_db") {
    spec.snr_grid_db = parse_snr_grid(value);
  } else if (k == "modes") {
    spec.modes = parse_modes(value);
  } else if (k == "m") {
    spec.samples = parse_int<int>(k, value);
  } else if (k == "p_fa") {
    spec.p_fa = parse_double(k, value);
  } else if (k == "variants") {
    spec.variants.clear();
    if (!value.empty()) {
      for (auto part : split(value, ',')) spec.variants.push_back(parse_variant(part));
    }
  } else if (k == "carrier_hz") {
    spec.carrier_hz = parse_double(k, value);
  } else if (k == "local_tx_rx_dbm") {
    spec.local_tx_rx_dbm = parse_double(k, value);
  } else if (k == "noise_floor_dbm") {
    spec.noise_floor_dbm = parse_double(k, value);
  } else if (k == "ric_gain_db") {
    spec.ric_gain_db = parse_double(k, value);
  } else if (k == "dic_gain_db") {
    spec.dic_gain_db = parse_double(k, value);
  } else if (k == "replications") {
    spec.replications = parse_int<int>(k, value);
  } else if (k == "seed") {
    spec.base_seed = parse_int<std::uint64_t>(k, value);
  } else if (k == "output_path") {
    spec.output_path = std::string(value);
  } else {
    throw ConfigError(k, "unknown key");
  }
}

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec = default_spec();
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    apply_setting(spec, line.substr(0, eq), line.substr(eq + 1));
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
  spec.validate();
  const double threshold = detector::threshold_for_false_alarm(spec.samples, spec.p_fa);
  const auto half = lossmodel::half_duplex_breakdown(spec.traffic, 0.0);
  if (half.saturated && options.log != nullptr) {
    *options.log << "warning: lambda_s * delta_t = "
                 << spec.traffic.lambda_s * lossmodel::vulnerable_window(spec.traffic)
                 << " > 1; half-duplex analytic loss clamped to 1\n";
  }

  std::vector<SweepRow> rows;
  for (double snr : spec.snr_grid_db) {
    const double mean_snr = std::pow(10.0, snr / 10.0);
    const double pmd_perfect = detector::pmd_perfect({spec.samples, threshold, mean_snr});

    for (sim::DuplexMode mode : spec.modes) {
      std::vector<std::pair<std::string, double>> cases;
      if (mode == sim::DuplexMode::FullDuplexImperfect) {
        const interference::LinkBudget lb{spec.local_tx_rx_dbm, spec.noise_floor_dbm + snr,
                                          spec.noise_floor_dbm};
        for (const auto& v : spec.variants) {
          const double placement =
              v.eps_place_m + interference::placement_error_from_bandwidth(spec.carrier_hz,
                                                                           v.bandwidth_hz);
          const auto p = interference::make_self_interference(
              lb, v.eps_amp_rel, placement, spec.carrier_hz, v.bandwidth_hz, spec.ric_gain_db,
              spec.dic_gain_db);
          cases.emplace_back(v.label(), detector::pmd_imperfect(spec.samples, threshold, p, lb));
        }
      } else {
        cases.emplace_back("none", pmd_perfect);
      }

      for (const auto& [label, p_md] : cases) {
        SweepRow row;
        row.snr_db = snr;
        row.mode = mode;
        row.variant = label;
        row.p_md = p_md;
        row.loss_analytic = mode == sim::DuplexMode::HalfDuplex
                                ? lossmodel::loss_half_duplex(spec.traffic, p_md)
                                : lossmodel::loss_full_duplex(p_md);
        row.seed = sim::derive_seed(spec.base_seed, rows.size());
        row.replications = spec.replications;
        const auto result = sim::run_experiment(spec.traffic, {mode, p_md}, spec.replications,
                                                row.seed, options.threads);
        row.loss_sim_mean = result.pu_loss_rate;
        row.loss_sim_ci95 = result.ci_halfwidth_95;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.snr_db) << ',' << sim::to_string(r.mode) << ',' << r.variant << ','
        << format_number(r.p_md) << ',' << format_number(r.loss_analytic) << ','
        << format_number(r.loss_sim_mean) << ',' << format_number(r.loss_sim_ci95) << ','
        << r.replications << ',' << r.seed << '\n';
  }
}

void write_csv_file(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw ConfigError("csv", "missing or unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 9) throw ConfigError("csv", "expected 9 columns in '" + line + "'");
    SweepRow r;
    r.snr_db = parse_double("snr_db", cells[0]);
    r.mode = parse_modes(cells[1]).at(0);
    r.variant = std::string(cells[2]);
    r.p_md = parse_double("p_md", cells[3]);
    r.loss_analytic = parse_double("loss_analytic", cells[4]);
    r.loss_sim_mean = parse_double("loss_sim_mean", cells[5]);
    r.loss_sim_ci95 = parse_double("loss_sim_ci95", cells[6]);
    r.replications = parse_int<int>("replications", cells[7]);
    r.seed = parse_int<std::uint64_t>("seed", cells[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  return read_csv(in);
}

std::string plot_script(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("plot_script: empty table");

  // Series keep first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const SweepRow*>> series;
  for (const auto& r : rows) {
    std::string name(sim::to_string(r.mode));
    if (r.mode == sim::DuplexMode::FullDuplexImperfect) name += " " + r.variant;
    auto& points = series[name];
    if (points.empty()) order.push_back(name);
    points.push_back(&r);
  }

  std::ostringstream out;
  out << "# PU packet loss rate vs mean SNR\n"
      << "# columns: snr_db loss_analytic loss_sim_mean loss_sim_ci95\n"
      << "set logscale y\n"
      << "set xlabel 'Mean SNR (dB)'\n"
      << "set ylabel 'PU packet loss rate'\n"
      << "set key outside right\n"
      << "set grid\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << "$series" << i << " << EOD\n";
    for (const SweepRow* r : series[order[i]]) {
      out << format_number(r->snr_db) << ' ' << format_number(r->loss_analytic) << ' '
          << format_number(r->loss_sim_mean) << ' ' << format_number(r->loss_sim_ci95) << '\n';
    }
    out << "EOD\n";
  }
  out << "plot";
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << (i == 0 ? " " : ", \\\n     ") << "$series" << i
        << " using 1:2 with linespoints title '" << order[i] << "'";
  }
  out << '\n';
  return out.str();
}

void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path) {
  const std::string script = plot_script(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << script;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fdcrn::sweep
