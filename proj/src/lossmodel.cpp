#include "fdcrn/lossmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdcrn::lossmodel {
namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_md must lie in [0, 1]");
}

}  // namespace

void TrafficConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  const auto rate = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!rate(lambda_p) || !rate(lambda_s) || n_packets <= 0 ||
      !positive(packet_len_bits) || !positive(rate_bps) || !positive(delay_bound_s) ||
      !positive(horizon_s)) {
    throw std::invalid_argument("TrafficConfig: rates must be finite and >= 0, other fields > 0");
  }
}

double vulnerable_window(const TrafficConfig& t) {
  t.validate();
  return std::max(0.0, t.burst_duration() - t.delay_bound_s);
}

HalfDuplexLoss half_duplex_breakdown(const TrafficConfig& t, double p_md) {
  check_probability(p_md);
  // N_SU δ_t / (N T_w) with N_SU = N λ_s T_w.
  const double raw = t.lambda_s * vulnerable_window(t);
  HalfDuplexLoss out;
  out.saturated = raw > 1.0;
  out.window_loss = std::min(1.0, raw);
  out.loss = 1.0 - (1.0 - out.window_loss) * (1.0 - p_md);
  return out;
}

double loss_half_duplex(const TrafficConfig& t, double p_md) {
  return half_duplex_breakdown(t, p_md).loss;
}

double loss_full_duplex(double p_md) {
  check_probability(p_md);
  return p_md;
}

}  // namespace fdcrn::lossmodel
