// fdcrn: SNR sweeps of primary-user packet loss for half-duplex and
// full-duplex cognitive radio, plus gnuplot script generation.
//
// Exit codes: 0 success, 2 invalid configuration or usage, 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdcrn/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitIo = 3;

constexpr const char* kOutputDirEnv = "FDCRN_OUTPUT_DIR";

struct SweepFlags {
  std::string config;
  std::string out;
  std::string modes;
  std::vector<std::string> settings;
  std::uint64_t seed = 0;
  int replications = 0;
  unsigned threads = 0;
};

std::string resolve_output(const SweepFlags& flags, const fdcrn::sweep::ExperimentSpec& spec) {
  if (!flags.out.empty()) return flags.out;
  std::string path = spec.output_path.empty() ? "sweep.csv" : spec.output_path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    if (std::filesystem::path(path).is_relative()) path = (std::filesystem::path(dir) / path).string();
  }
  return path;
}

fdcrn::sweep::ExperimentSpec build_spec(const SweepFlags& flags, CLI::App& cmd) {
  auto spec = fdcrn::sweep::load_config(flags.config);
  for (const auto& kv : flags.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw fdcrn::sweep::ConfigError(kv, "--set expects key=value");
    fdcrn::sweep::apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  const auto given = [&](const char* name) {
    const auto* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--seed")) spec.base_seed = flags.seed;
  if (given("--replications")) spec.replications = flags.replications;
  if (given("--modes")) spec.modes = fdcrn::sweep::parse_modes(flags.modes);
  spec.finalize();
  spec.validate();
  return spec;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const fdcrn::sweep::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const fdcrn::sweep::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primary-user packet loss in half/full-duplex cognitive radio networks"};
  app.require_subcommand(1);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Run an SNR sweep and write the result CSV");
  sweep->add_option("--config", sweep_flags.config, "Key-value config file")->required();
  sweep->add_option("--out", sweep_flags.out, "Output CSV path");
  sweep->add_option("--seed", sweep_flags.seed, "Base seed");
  sweep->add_option("--replications", sweep_flags.replications, "Replications per row");
  sweep->add_option("--modes", sweep_flags.modes, "Comma list of half,full,full-imperfect");
  sweep->add_option("--set", sweep_flags.settings, "Override a config key (key=value)");
  sweep->add_option("--threads", sweep_flags.threads, "Replication workers (0 = all cores)");

  std::string plot_in;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a sweep CSV");
  plot->add_option("--in", plot_in, "Sweep CSV")->required();
  plot->add_option("--out", plot_out, "Script path")->required();

  SweepFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("--config", validate_flags.config, "Key-value config file")->required();
  validate->add_option("--set", validate_flags.settings, "Override a config key (key=value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  if (sweep->parsed()) {
    return guarded([&] {
      const auto spec = build_spec(sweep_flags, *sweep);
      const std::string out = resolve_output(sweep_flags, spec);
      fdcrn::sweep::SweepOptions options;
      options.threads = sweep_flags.threads;
      options.log = &std::cerr;
      const auto rows = fdcrn::sweep::run_sweep(spec, options);
      fdcrn::sweep::write_csv_file(rows, out);
      std::cout << "wrote " << rows.size() << " rows to " << out << '\n';
      return kExitOk;
    });
  }
  if (plot->parsed()) {
    return guarded([&] {
      const auto rows = fdcrn::sweep::read_csv_file(plot_in);
      if (rows.empty()) throw fdcrn::sweep::ConfigError("csv", "table has no rows");
      fdcrn::sweep::emit_plot_script(rows, plot_out);
      std::cout << "wrote " << plot_out << '\n';
      return kExitOk;
    });
  }
  return guarded([&] {
    const auto spec = build_spec(validate_flags, *validate);
    std::size_t rows_per_snr = 0;
    for (auto mode : spec.modes) {
      rows_per_snr += mode == fdcrn::sim::DuplexMode::FullDuplexImperfect ? spec.variants.size() : 1;
    }
    std::cout << "ok: " << spec.snr_grid_db.size() * rows_per_snr << " rows, "
              << spec.replications << " replications each\n";
    return kExitOk;
  });
}
