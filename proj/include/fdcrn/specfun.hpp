#pragma once

// Special functions and the energy-detector test-statistic distributions.
//
// The statistic Y under "signal present" is noncentral chi-square with 2m
// degrees of freedom. Under Rayleigh fading the instantaneous SNR (half the
// noncentrality) is exponential, which gives the mixture distribution below.

#include <cstdint>
#include <random>

namespace fdcrn::specfun {

using RngStream = std::mt19937_64;

/// Upper incomplete gamma function Γ(a, z) = ∫_z^∞ t^{a-1} e^{-t} dt.
/// Throws std::domain_error for a <= 0 or z < 0.
double gamma_upper(double a, double z);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Modified Bessel function of the first kind I_n(x), n >= 0, x >= 0.
/// Overflows to +inf past x ≈ 713; use log_bessel_i there.
double bessel_i(int order, double x);

/// log I_n(x), evaluated without overflow for any finite x >= 0.
double log_bessel_i(int order, double x);

struct NoncentralChiSquare {
  int half_dof = 1;           // m; the distribution has 2m degrees of freedom
  double noncentrality = 0.0;  // λ

  void validate() const;
};

struct RayleighMixture {
  int half_dof = 1;
  double mean_noncentrality_half = 1.0;  // mean of the exponential prior on λ/2

  void validate() const;
};

double ncx2_pdf(const NoncentralChiSquare& dist, double y);

/// Pr(Y <= y). Poisson-weighted sum of regularized gamma terms.
double ncx2_cdf(const NoncentralChiSquare& dist, double y);

/// Pr(Y <= y) when λ/2 ~ Exponential(mean_noncentrality_half).
///
/// Computed by integrating ncx2_cdf against the exponential prior. This is
/// the reference route for the missed-detection probability. The result is
/// not clamped; callers that need a probability clamp it themselves.
double mixture_cdf(const RayleighMixture& mix, double y);

/// Closed form of the same mixture CDF, evaluated term by
/// term (including the Γ(m-1, 0)/Γ(m-1) terms that equal one). Requires
/// m >= 2. Unclamped; kept for comparison against mixture_cdf.
double mixture_cdf_closed_form(const RayleighMixture& mix, double y);

/// One draw of Y: λ/2 ~ Exponential(mean), then Y ~ ncx2(2m, λ).
double sample_mixture(const RayleighMixture& mix, RngStream& rng);

/// One draw from a noncentral chi-square.
double sample_ncx2(const NoncentralChiSquare& dist, RngStream& rng);

}  // namespace fdcrn::specfun
