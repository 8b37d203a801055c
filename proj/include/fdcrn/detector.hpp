#pragma once

#include "fdcrn/interference.hpp"

namespace fdcrn::detector {

inline constexpr int kDefaultSamples = 5;
inline constexpr double kDefaultFalseAlarm = 0.1;

struct DetectorConfig {
  int samples = kDefaultSamples;  // m, the time-bandwidth product
  double threshold = 1.0;
  double mean_snr = 1.0;          // mean of λ/2 under Rayleigh fading

  /// Requires samples >= 2, threshold > 0, mean_snr > 0.
  void validate() const;
};

/// Pr(Y < threshold | PU active) with Y's noncentrality averaged over fading.
double pmd_perfect(const DetectorConfig& cfg);

/// Same quantity before clamping to [0, 1].
double pmd_unclamped(const DetectorConfig& cfg);

/// Mean noncentrality half k̄ = noncentrality_mean / 2 for the imperfect case.
double imperfect_mean_parameter(const interference::SelfInterferenceParams& p,
                                const interference::LinkBudget& lb);

/// Detector configuration for an imperfect full-duplex node: mean_snr = k̄.
DetectorConfig imperfect_config(int samples, double threshold,
                                const interference::SelfInterferenceParams& p,
                                const interference::LinkBudget& lb);

/// Missed detection in imperfect full duplex. Shares pmd_perfect's code path;
/// only the mean parameter differs.
double pmd_imperfect(const DetectorConfig& cfg);
double pmd_imperfect(int samples, double threshold,
                     const interference::SelfInterferenceParams& p,
                     const interference::LinkBudget& lb);

/// Pr(Y > threshold | PU idle), Y ~ central chi-square with 2m degrees of freedom.
double false_alarm_probability(int samples, double threshold);

/// Threshold giving the requested false-alarm probability (bisection, 1e-10).
double threshold_for_false_alarm(int samples, double p_fa);

}  // namespace fdcrn::detector
