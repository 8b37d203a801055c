#pragma once

namespace fdcrn::lossmodel {

struct TrafficConfig {
  double lambda_p = 2.0;  // PU session arrivals per second
  double lambda_s = 5.0;  // SU session arrivals per second
  int n_packets = 100;    // packets per session
  double packet_len_bits = 8192.0;
  double rate_bps = 8.192e6;
  double delay_bound_s = 0.05;  // longest wait a PU session tolerates
  double horizon_s = 100.0;     // observation window

  /// Rates may be zero (that flow is idle); every other field must be > 0.
  void validate() const;
  double packet_duration() const { return packet_len_bits / rate_bps; }
  double burst_duration() const { return n_packets * packet_duration(); }
};

/// δ_t = max(0, N L_p / R - D): a PU arriving this early in an SU burst
/// waits past its delay bound.
double vulnerable_window(const TrafficConfig& t);

struct HalfDuplexLoss {
  double window_loss = 0.0;  // min(1, λ_s δ_t)
  double loss = 0.0;
  bool saturated = false;    // λ_s δ_t > 1 and was clamped
};

HalfDuplexLoss half_duplex_breakdown(const TrafficConfig& t, double p_md);

/// 1 - (1 - min(1, λ_s δ_t)) (1 - p_md)
double loss_half_duplex(const TrafficConfig& t, double p_md);

/// In full duplex the PU is lost exactly when the SU misses it.
double loss_full_duplex(double p_md);

}  // namespace fdcrn::lossmodel
