#include "fdcrn/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdcrn/specfun.hpp"

namespace fdcrn::detector {

void DetectorConfig::validate() const {
  if (samples < 2) throw std::invalid_argument("DetectorConfig: samples must be >= 2");
  if (!(threshold > 0.0)) throw std::invalid_argument("DetectorConfig: threshold must be > 0");
  if (!(mean_snr > 0.0) || std::isinf(mean_snr)) {
    throw std::invalid_argument("DetectorConfig: mean_snr must be finite and > 0");
  }
}

double pmd_unclamped(const DetectorConfig& cfg) {
  cfg.validate();
  return specfun::mixture_cdf({cfg.samples, cfg.mean_snr}, cfg.threshold);
}

double pmd_perfect(const DetectorConfig& cfg) { return std::clamp(pmd_unclamped(cfg), 0.0, 1.0); }

double imperfect_mean_parameter(const interference::SelfInterferenceParams& p,
                                const interference::LinkBudget& lb) {
  const double n_i = interference::residual_noise_psd(p, lb);
  return 0.5 * interference::noncentrality_mean(lb, n_i);
}

DetectorConfig imperfect_config(int samples, double threshold,
                                const interference::SelfInterferenceParams& p,
                                const interference::LinkBudget& lb) {
  DetectorConfig cfg{samples, threshold, imperfect_mean_parameter(p, lb)};
  cfg.validate();
  return cfg;
}

double pmd_imperfect(const DetectorConfig& cfg) { return pmd_perfect(cfg); }

double pmd_imperfect(int samples, double threshold, const interference::SelfInterferenceParams& p,
                     const interference::LinkBudget& lb) {
  return pmd_imperfect(imperfect_config(samples, threshold, p, lb));
}

double false_alarm_probability(int samples, double threshold) {
  if (samples < 1) throw std::invalid_argument("false_alarm_probability: samples must be >= 1");
  if (!(threshold >= 0.0)) return 1.0;
  return specfun::gamma_q(samples, 0.5 * threshold);
}

double threshold_for_false_alarm(int samples, double p_fa) {
  if (samples < 1) throw std::invalid_argument("threshold_for_false_alarm: samples must be >= 1");
  if (!(p_fa > 0.0 && p_fa < 1.0)) {
    throw std::invalid_argument("threshold_for_false_alarm: p_fa must lie in (0, 1)");
  }
  double lo = 0.0;
  double hi = 2.0 * samples + 1.0;
  for (int i = 0; false_alarm_probability(samples, hi) > p_fa; ++i) {
    if (i > 200) throw std::runtime_error("threshold_for_false_alarm: no bracket found");
    lo = hi;
    hi *= 2.0;
  }
  // Survival is decreasing in the threshold.
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (false_alarm_probability(samples, mid) > p_fa) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fdcrn::detector
