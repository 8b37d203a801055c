#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>

#include "fdcrn/detector.hpp"
#include "fdcrn/interference.hpp"
#include "fdcrn/lossmodel.hpp"
#include "fdcrn/simulator.hpp"
#include "fdcrn/specfun.hpp"
#include "fdcrn/sweep.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

void bind_specfun(py::module_& m) {
  namespace sf = fdcrn::specfun;
  m.def("gamma_upper", &sf::gamma_upper, "a"_a, "z"_a, "Upper incomplete gamma Γ(a, z)");
  m.def("bessel_i", &sf::bessel_i, "order"_a, "x"_a, "Modified Bessel function I_n(x)");
  m.def(
      "ncx2_pdf", [](int m, double lambda, double y) { return sf::ncx2_pdf({m, lambda}, y); },
      "half_dof"_a, "noncentrality"_a, "y"_a);
  m.def(
      "ncx2_cdf", [](int m, double lambda, double y) { return sf::ncx2_cdf({m, lambda}, y); },
      "half_dof"_a, "noncentrality"_a, "y"_a);
  m.def(
      "mixture_cdf", [](int m, double mean, double y) { return sf::mixture_cdf({m, mean}, y); },
      "half_dof"_a, "mean_noncentrality_half"_a, "y"_a);
  m.def(
      "mixture_cdf_closed_form",
      [](int m, double mean, double y) { return sf::mixture_cdf_closed_form({m, mean}, y); },
      "half_dof"_a, "mean_noncentrality_half"_a, "y"_a);
  m.def(
      "sample_mixture",
      [](int m, double mean, std::size_t count, std::uint64_t seed) {
        sf::RngStream rng(seed);
        const sf::RayleighMixture mix{m, mean};
        std::vector<double> out(count);
        for (auto& y : out) y = sf::sample_mixture(mix, rng);
        return out;
      },
      "half_dof"_a, "mean_noncentrality_half"_a, "count"_a, "seed"_a);
}

void bind_interference(py::module_& m) {
  namespace fi = fdcrn::interference;
  py::class_<fi::SelfInterferenceParams>(m, "SelfInterferenceParams")
      .def(py::init<>())
      .def_readwrite("a_ant", &fi::SelfInterferenceParams::a_ant)
      .def_readwrite("eps_amp", &fi::SelfInterferenceParams::eps_amp)
      .def_readwrite("eps_place", &fi::SelfInterferenceParams::eps_place)
      .def_readwrite("carrier_hz", &fi::SelfInterferenceParams::carrier_hz)
      .def_readwrite("bandwidth_hz", &fi::SelfInterferenceParams::bandwidth_hz)
      .def_readwrite("ric_gain_db", &fi::SelfInterferenceParams::ric_gain_db)
      .def_readwrite("dic_gain_db", &fi::SelfInterferenceParams::dic_gain_db)
      .def_property_readonly("wavelength", &fi::SelfInterferenceParams::wavelength);

  py::class_<fi::LinkBudget>(m, "LinkBudget")
      .def(py::init<>())
      .def(py::init([](double local, double remote, double noise) {
             return fi::LinkBudget{local, remote, noise};
           }),
           "local_tx_rx_dbm"_a, "remote_rx_dbm"_a, "noise_floor_dbm"_a)
      .def_readwrite("local_tx_rx_dbm", &fi::LinkBudget::local_tx_rx_dbm)
      .def_readwrite("remote_rx_dbm", &fi::LinkBudget::remote_rx_dbm)
      .def_readwrite("noise_floor_dbm", &fi::LinkBudget::noise_floor_dbm);

  m.def("make_self_interference", &fi::make_self_interference, "link"_a, "eps_amp_rel"_a,
        "eps_place"_a, "carrier_hz"_a = 2.48e9, "bandwidth_hz"_a = 20e6, "ric_gain_db"_a = 10.0,
        "dic_gain_db"_a = 20.0);
  m.def("residual_si_power", &fi::residual_si_power, "params"_a);
  m.def("placement_error_from_bandwidth", &fi::placement_error_from_bandwidth, "carrier_hz"_a,
        "bandwidth_hz"_a);
  m.def("residual_noise_psd", &fi::residual_noise_psd, "params"_a, "link"_a);
  m.def("noncentrality_mean", &fi::noncentrality_mean, "link"_a, "n_i"_a);
}

void bind_detector(py::module_& m) {
  namespace fd = fdcrn::detector;
  py::class_<fd::DetectorConfig>(m, "DetectorConfig")
      .def(py::init([](int samples, double threshold, double mean_snr) {
             return fd::DetectorConfig{samples, threshold, mean_snr};
           }),
           "samples"_a, "threshold"_a, "mean_snr"_a)
      .def_readwrite("samples", &fd::DetectorConfig::samples)
      .def_readwrite("threshold", &fd::DetectorConfig::threshold)
      .def_readwrite("mean_snr", &fd::DetectorConfig::mean_snr);

  m.def("pmd_perfect", &fd::pmd_perfect, "config"_a);
  m.def("pmd_imperfect",
        py::overload_cast<int, double, const fdcrn::interference::SelfInterferenceParams&,
                          const fdcrn::interference::LinkBudget&>(&fd::pmd_imperfect),
        "samples"_a, "threshold"_a, "params"_a, "link"_a);
  m.def("threshold_for_false_alarm", &fd::threshold_for_false_alarm, "samples"_a, "p_fa"_a);
}

void bind_traffic(py::module_& m) {
  namespace fl = fdcrn::lossmodel;
  namespace fs = fdcrn::sim;
  py::class_<fl::TrafficConfig>(m, "TrafficConfig")
      .def(py::init<>())
      .def_readwrite("lambda_p", &fl::TrafficConfig::lambda_p)
      .def_readwrite("lambda_s", &fl::TrafficConfig::lambda_s)
      .def_readwrite("n_packets", &fl::TrafficConfig::n_packets)
      .def_readwrite("packet_len_bits", &fl::TrafficConfig::packet_len_bits)
      .def_readwrite("rate_bps", &fl::TrafficConfig::rate_bps)
      .def_readwrite("delay_bound_s", &fl::TrafficConfig::delay_bound_s)
      .def_readwrite("horizon_s", &fl::TrafficConfig::horizon_s)
      .def_property_readonly("burst_duration", &fl::TrafficConfig::burst_duration);

  m.def("vulnerable_window", &fl::vulnerable_window, "traffic"_a);
  m.def("loss_half_duplex", &fl::loss_half_duplex, "traffic"_a, "p_md"_a);
  m.def("loss_full_duplex", &fl::loss_full_duplex, "p_md"_a);

  py::enum_<fs::DuplexMode>(m, "DuplexMode")
      .value("HalfDuplex", fs::DuplexMode::HalfDuplex)
      .value("FullDuplexPerfect", fs::DuplexMode::FullDuplexPerfect)
      .value("FullDuplexImperfect", fs::DuplexMode::FullDuplexImperfect);

  py::class_<fs::DuplexScenario>(m, "DuplexScenario")
      .def(py::init([](fs::DuplexMode mode, double p_md) { return fs::DuplexScenario{mode, p_md}; }),
           "mode"_a, "p_md"_a)
      .def_readwrite("mode", &fs::DuplexScenario::mode)
      .def_readwrite("p_md", &fs::DuplexScenario::p_md);

  py::class_<fs::SimResult>(m, "SimResult")
      .def_readonly("pu_packets_offered", &fs::SimResult::pu_packets_offered)
      .def_readonly("pu_packets_lost", &fs::SimResult::pu_packets_lost)
      .def_readonly("pu_packets_delivered", &fs::SimResult::pu_packets_delivered)
      .def_readonly("su_packets_sent", &fs::SimResult::su_packets_sent)
      .def_readonly("pu_loss_rate", &fs::SimResult::pu_loss_rate)
      .def_readonly("su_channel_share", &fs::SimResult::su_channel_share)
      .def_readonly("replication_count", &fs::SimResult::replication_count)
      .def_readonly("ci_halfwidth_95", &fs::SimResult::ci_halfwidth_95);

  m.def("run_replication", &fs::run_replication, "traffic"_a, "scenario"_a, "seed"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("run_experiment", &fs::run_experiment, "traffic"_a, "scenario"_a, "replications"_a,
        "base_seed"_a, "threads"_a = 0, py::call_guard<py::gil_scoped_release>());
}

void bind_sweep(py::module_& m) {
  namespace sw = fdcrn::sweep;
  py::register_exception<sw::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<sw::IoError>(m, "IoError", PyExc_OSError);

  // Runs a sweep from config text plus key overrides; returns the CSV text.
  m.def(
      "run_sweep",
      [](const std::string& config, const std::map<std::string, std::string>& settings) {
        auto spec = sw::parse_config(config);
        for (const auto& [k, v] : settings) sw::apply_setting(spec, k, v);
        spec.finalize();
        std::vector<sw::SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sw::run_sweep(spec);
        }
        std::ostringstream out;
        sw::write_csv(rows, out);
        return out.str();
      },
      "config"_a = "", "settings"_a = std::map<std::string, std::string>{});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-detector statistics, self-interference model and CRN loss simulation";
  bind_specfun(m);
  bind_interference(m);
  bind_detector(m);
  bind_traffic(m);
  bind_sweep(m);
}
