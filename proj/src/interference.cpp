#include "fdcrn/interference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdcrn::interference {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

void SelfInterferenceParams::validate() const {
  if (!(bandwidth_hz > 0.0) || !(carrier_hz > 0.5 * bandwidth_hz)) {
    throw std::invalid_argument("SelfInterferenceParams: need carrier_hz > bandwidth_hz/2 > 0");
  }
  if (!(a_ant >= 0.0) || !(eps_amp >= 0.0) || !(eps_place >= 0.0)) {
    throw std::invalid_argument("SelfInterferenceParams: a_ant, eps_amp, eps_place must be >= 0");
  }
  if (!(ric_gain_db >= 0.0) || !(dic_gain_db >= 0.0)) {
    throw std::invalid_argument("SelfInterferenceParams: cancellation gains must be >= 0 dB");
  }
}

void LinkBudget::validate() const {
  if (!(local_tx_rx_dbm > remote_rx_dbm) || !(remote_rx_dbm >= noise_floor_dbm)) {
    throw std::invalid_argument(
        "LinkBudget: need local_tx_rx_dbm > remote_rx_dbm >= noise_floor_dbm");
  }
}

SelfInterferenceParams make_self_interference(const LinkBudget& lb, double eps_amp_rel,
                                              double eps_place, double carrier_hz,
                                              double bandwidth_hz, double ric_gain_db,
                                              double dic_gain_db) {
  lb.validate();
  SelfInterferenceParams p;
  p.a_ant = std::sqrt(dbm_to_mw(lb.local_tx_rx_dbm));
  p.eps_amp = eps_amp_rel * p.a_ant;
  p.eps_place = eps_place;
  p.carrier_hz = carrier_hz;
  p.bandwidth_hz = bandwidth_hz;
  p.ric_gain_db = ric_gain_db;
  p.dic_gain_db = dic_gain_db;
  p.validate();
  return p;
}

double residual_si_power(const SelfInterferenceParams& p) {
  p.validate();
  const double phase = 2.0 * std::numbers::pi * p.eps_place / p.wavelength();
  return 2.0 * p.a_ant * (p.a_ant + p.eps_amp) * (1.0 - std::cos(phase)) + p.eps_amp * p.eps_amp;
}

double placement_error_from_bandwidth(double carrier_hz, double bandwidth_hz) {
  if (!(bandwidth_hz >= 0.0) || !(bandwidth_hz < 2.0 * carrier_hz)) {
    throw std::domain_error("placement_error_from_bandwidth: need 0 <= bandwidth < 2 * carrier");
  }
  const double low_edge = carrier_hz - 0.5 * bandwidth_hz;
  const double high_edge = carrier_hz + 0.5 * bandwidth_hz;
  return (kSpeedOfLight / low_edge - kSpeedOfLight / high_edge) / 4.0;
}

double residual_noise_psd(const SelfInterferenceParams& p, const LinkBudget& lb) {
  lb.validate();
  const double expected_amp = std::sqrt(dbm_to_mw(lb.local_tx_rx_dbm));
  if (std::abs(p.a_ant - expected_amp) > 1e-9 * expected_amp) {
    throw std::invalid_argument(
        "residual_noise_psd: a_ant does not match the link budget's local power");
  }
  const double cancellation = std::pow(10.0, (p.ric_gain_db + p.dic_gain_db) / 10.0);
  return residual_si_power(p) / cancellation;
}

double noncentrality_mean(const LinkBudget& lb, double n_i) {
  lb.validate();
  if (!(n_i >= 0.0)) throw std::invalid_argument("noncentrality_mean: n_i must be >= 0");
  const double signal = dbm_to_mw(lb.remote_rx_dbm);
  const double noise = dbm_to_mw(lb.noise_floor_dbm);
  if (std::isinf(n_i)) return 1.0;
  return (signal + n_i) / (noise + n_i);
}

}  // namespace fdcrn::interference
