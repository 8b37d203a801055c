#pragma once

// SNR sweeps across duplex modes: configuration, orchestration and output
// (CSV table and a gnuplot script).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fdcrn/lossmodel.hpp"
#include "fdcrn/simulator.hpp"

namespace fdcrn::sweep {

/// Invalid configuration. field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InterferenceVariant {
  double eps_place_m = 1e-3;    // explicit receive-antenna placement error
  double eps_amp_rel = 0.1;     // amplitude mismatch as a fraction of a_ant
  double bandwidth_hz = 20e6;   // adds placement_error_from_bandwidth to eps_place_m

  std::string label() const;
};

struct ExperimentSpec {
  lossmodel::TrafficConfig traffic;
  /// When set, D = fraction * N L_p / R (applied by finalize()).
  std::optional<double> delay_bound_fraction;
  std::vector<double> snr_grid_db;
  std::vector<sim::DuplexMode> modes;
  int samples = 5;
  double p_fa = 0.1;
  std::vector<InterferenceVariant> variants;
  double carrier_hz = 2.48e9;
  double local_tx_rx_dbm = -40.0;
  double noise_floor_dbm = -100.0;
  double ric_gain_db = 10.0;
  double dic_gain_db = 20.0;
  int replications = 100;
  std::uint64_t base_seed = 1;
  std::string output_path;

  /// Resolves delay_bound_fraction into traffic.delay_bound_s.
  void finalize();
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Two-flow setup with N = 100, 1 KByte packets, λ_p = 2/s, λ_s = 5/s, m = 5,
/// D = half a burst, SNR 0..30 dB in 2 dB steps, all three modes and the
/// eight (ε_d, ε_A, W) combinations of {1, 2} mm x {0.1, 0.2} A x {20, 85} MHz.
ExperimentSpec default_spec();

/// Sets one key. Keys and value syntax are listed in the README.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Parses "key = value" lines ('#' starts a comment) on top of default_spec().
/// Does not finalize or validate.
ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::string& path);

std::vector<double> parse_snr_grid(std::string_view text);
std::vector<sim::DuplexMode> parse_modes(std::string_view text);

struct SweepRow {
  double snr_db = 0.0;
  sim::DuplexMode mode = sim::DuplexMode::HalfDuplex;
  std::string variant;
  double p_md = 0.0;
  double loss_analytic = 0.0;
  double loss_sim_mean = 0.0;
  double loss_sim_ci95 = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
};

struct SweepOptions {
  unsigned threads = 0;           // replication workers; 0 = hardware concurrency
  std::ostream* log = nullptr;    // warnings (e.g. saturated half-duplex window)
};

/// Rows ordered by SNR, then mode order in the spec, then variant order.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "snr_db,mode,variant,p_md,loss_analytic,loss_sim_mean,loss_sim_ci95,replications,seed";

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_csv_file(const std::vector<SweepRow>& rows, const std::string& path);
/// Throws ConfigError on a malformed table.
std::vector<SweepRow> read_csv(std::istream& in);
std::vector<SweepRow> read_csv_file(const std::string& path);

/// Self-contained gnuplot script: loss vs SNR, one series per (mode, variant),
/// logarithmic y axis. Throws std::invalid_argument for an empty table.
std::string plot_script(const std::vector<SweepRow>& rows);
void emit_plot_script(const std::vector<SweepRow>& rows, const std::string& path);

std::string format_number(double value);

}  // namespace fdcrn::sweep
