#pragma once

// Residual self-interference of a full-duplex node using antenna cancellation
// (two transmit antennas placed so their signals arrive π out of phase at the
// receive antenna), followed by fixed RF and digital cancellation stages.
//
// Powers are linear milliwatts; amplitudes are sqrt(mW).

namespace fdcrn::interference {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

struct SelfInterferenceParams {
  double a_ant = 0.0;         // amplitude at the receive antenna from one transmit antenna
  double eps_amp = 0.0;       // amplitude mismatch between the two transmit paths
  double eps_place = 0.0;     // receive-antenna placement error (m)
  double carrier_hz = 2.48e9;
  double bandwidth_hz = 20e6;
  double ric_gain_db = 10.0;  // RF interference cancellation
  double dic_gain_db = 20.0;  // digital interference cancellation

  void validate() const;
  double wavelength() const { return kSpeedOfLight / carrier_hz; }
};

struct LinkBudget {
  double local_tx_rx_dbm = -40.0;  // own transmit signal at the receive antenna
  double remote_rx_dbm = -70.0;    // primary-user signal at the receive antenna
  double noise_floor_dbm = -100.0;

  /// Requires local > remote >= noise floor.
  void validate() const;
};

/// Builds parameters whose a_ant matches the link budget's local power and
/// whose amplitude mismatch is eps_amp_rel * a_ant.
SelfInterferenceParams make_self_interference(const LinkBudget& lb, double eps_amp_rel,
                                              double eps_place, double carrier_hz,
                                              double bandwidth_hz, double ric_gain_db = 10.0,
                                              double dic_gain_db = 20.0);

/// Power left after antenna cancellation:
///   2 A (A + ε_A) (1 - cos(2π ε_d / λ)) + ε_A²
/// which is |κ|² for the two-antenna phasor sum.
double residual_si_power(const SelfInterferenceParams& p);

/// Placement error equivalent to the wavelength spread across the band:
/// [c/(f_c - W/2) - c/(f_c + W/2)] / 4.
double placement_error_from_bandwidth(double carrier_hz, double bandwidth_hz);

/// Residual self-interference power after RIC and DIC, in mW.
///
/// Antenna-cancellation residual divided by 10^{(RIC+DIC)/10}, all linear.
/// Throws std::invalid_argument if p.a_ant does not match lb.local_tx_rx_dbm.
double residual_noise_psd(const SelfInterferenceParams& p, const LinkBudget& lb);

/// Mean noncentrality (S + N_i) / (N_t + N_i) of the interference-normalized
/// statistic, with S and N_t taken from the link budget.
double noncentrality_mean(const LinkBudget& lb, double n_i);

}  // namespace fdcrn::interference
