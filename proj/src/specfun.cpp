#include "fdcrn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdcrn/quadrature.hpp"

namespace fdcrn::specfun {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 1'000'000;

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for e^x x^{-a} Γ(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_upper_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

void check_gamma_args(const char* who, double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::domain_error(std::string(who) + ": requires a > 0 and x >= 0");
  }
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args("gamma_p", a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_upper_fraction(a, x) * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
  check_gamma_args("gamma_q", a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_upper_fraction(a, x) * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_upper(double a, double z) {
  check_gamma_args("gamma_upper", a, z);
  if (z == 0.0) return std::tgamma(a);
  if (std::isinf(z)) return 0.0;
  if (z < a + 1.0) return std::tgamma(a) * (1.0 - gamma_p_series(a, z));
  return gamma_upper_fraction(a, z) * std::exp(-z + a * std::log(z));
}

double log_bessel_i(int order, double x) {
  if (order < 0) throw std::domain_error("bessel_i: order must be nonnegative");
  if (!(x >= 0.0)) throw std::domain_error("bessel_i: x must be nonnegative");
  if (x == 0.0) return order == 0 ? 0.0 : -std::numeric_limits<double>::infinity();

  // Ascending series sum_k (x/2)^{2k+n} / (k! (k+n)!), carried relative to
  // its first term and rescaled before it can overflow.
  constexpr double kRescale = 1e280;
  const double log_rescale = std::log(kRescale);
  const double quarter_x2 = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  double offset = 0.0;
  for (int k = 0; k < kMaxIterations; ++k) {
    term *= quarter_x2 / ((k + 1.0) * (k + 1.0 + order));
    sum += term;
    if (term < sum * kEps) break;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      offset += log_rescale;
    }
  }
  return order * std::log(0.5 * x) - std::lgamma(order + 1.0) + offset + std::log(sum);
}

double bessel_i(int order, double x) { return std::exp(log_bessel_i(order, x)); }

void NoncentralChiSquare::validate() const {
  if (half_dof < 1) throw std::invalid_argument("NoncentralChiSquare: half_dof must be >= 1");
  if (!(noncentrality >= 0.0) || std::isinf(noncentrality)) {
    throw std::invalid_argument("NoncentralChiSquare: noncentrality must be finite and >= 0");
  }
}

void RayleighMixture::validate() const {
  if (half_dof < 1) throw std::invalid_argument("RayleighMixture: half_dof must be >= 1");
  if (!(mean_noncentrality_half > 0.0) || std::isinf(mean_noncentrality_half)) {
    throw std::invalid_argument("RayleighMixture: mean_noncentrality_half must be finite and > 0");
  }
}

double ncx2_pdf(const NoncentralChiSquare& dist, double y) {
  dist.validate();
  if (!(y >= 0.0) || std::isinf(y)) return 0.0;
  const int m = dist.half_dof;
  const double lambda = dist.noncentrality;

  if (y == 0.0) return m == 1 ? 0.5 * std::exp(-0.5 * lambda) : 0.0;
  if (lambda == 0.0) {
    // central chi-square with 2m degrees of freedom
    return std::exp((m - 1) * std::log(y) - 0.5 * y - m * std::log(2.0) - std::lgamma(m));
  }
  const double log_pdf = std::log(0.5) + 0.5 * (m - 1) * (std::log(y) - std::log(lambda)) -
                         0.5 * (lambda + y) + log_bessel_i(m - 1, std::sqrt(lambda * y));
  return std::exp(log_pdf);
}

double ncx2_cdf(const NoncentralChiSquare& dist, double y) {
  dist.validate();
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;
  const int m = dist.half_dof;
  const double x = 0.5 * y;
  const double mu = 0.5 * dist.noncentrality;
  if (mu == 0.0) return gamma_p(m, x);

  // sum_j Pois(j; mu) P(m + j, x), walked outward from the Poisson mode.
  // P(a + 1, x) = P(a, x) - x^a e^{-x} / Γ(a + 1).
  constexpr double kNegligibleWeight = 1e-18;
  const double log_x = std::log(x);
  const double log_mu = std::log(mu);
  const auto gamma_density = [&](double a) {
    return std::exp(a * log_x - x - std::lgamma(a + 1.0));
  };

  const double mode = std::floor(mu);
  const double mode_weight = std::exp(-mu + mode * log_mu - std::lgamma(mode + 1.0));
  const double mode_p = gamma_p(m + mode, x);
  double sum = mode_weight * mode_p;

  double weight = mode_weight;
  double p = mode_p;
  for (double j = mode; j < mode + kMaxIterations; j += 1.0) {
    p = std::max(0.0, p - gamma_density(m + j));
    weight *= mu / (j + 1.0);
    const double contribution = weight * p;
    sum += contribution;
    if (weight < kNegligibleWeight || p == 0.0 || contribution < sum * kEps) break;
  }

  weight = mode_weight;
  p = mode_p;
  for (double j = mode; j > 0.0; j -= 1.0) {
    p = std::min(1.0, p + gamma_density(m + j - 1.0));
    weight *= j / mu;
    sum += weight * p;
    if (weight < kNegligibleWeight || weight < sum * kEps) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double mixture_cdf(const RayleighMixture& mix, double y) {
  mix.validate();
  if (!(y > 0.0)) return 0.0;
  if (std::isinf(y)) return 1.0;

  // Substituting λ/2 = mean * u puts the prior weight at e^{-u}; past u = 40
  // the remaining mass is below 5e-18.
  constexpr double kUpper = 40.0;
  const double mean = mix.mean_noncentrality_half;
  const auto integrand = [&](double u) {
    const NoncentralChiSquare conditional{mix.half_dof, 2.0 * mean * u};
    return ncx2_cdf(conditional, y) * std::exp(-u);
  };
  // The conditional CDF falls off around λ = y. A doubling ladder from there
  // keeps a narrow tail from hiding between the nodes of one wide panel.
  const double knee = y / (2.0 * mean);
  std::vector<double> cuts{0.25 * knee, 0.5 * knee};
  for (double c = knee; c < kUpper; c *= 2.0) cuts.push_back(c);
  return quadrature::integrate(integrand, 0.0, kUpper, cuts, 1e-12).value;
}

double mixture_cdf_closed_form(const RayleighMixture& mix, double y) {
  mix.validate();
  if (mix.half_dof < 2) {
    throw std::domain_error("mixture_cdf_closed_form: requires half_dof >= 2");
  }
  const double a = mix.half_dof - 1.0;
  const double v = mix.mean_noncentrality_half;
  const double complete = std::tgamma(a);
  const double shrink = std::exp(-y / (2.0 * (1.0 + v)));

  const double central_part = (gamma_upper(a, 0.0) - gamma_upper(a, 0.5 * y)) / complete;
  const double prefactor = std::pow((1.0 + v) / v, a);
  const double bracket = 1.0 - shrink - gamma_upper(a, 0.0) / complete +
                         shrink * gamma_upper(a, v * y / (2.0 * (1.0 + v))) / complete;
  return central_part + prefactor * bracket;
}

double sample_ncx2(const NoncentralChiSquare& dist, RngStream& rng) {
  dist.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  const double shifted = normal(rng) + std::sqrt(dist.noncentrality);
  double y = shifted * shifted;
  for (int i = 1; i < 2 * dist.half_dof; ++i) {
    const double z = normal(rng);
    y += z * z;
  }
  return y;
}

double sample_mixture(const RayleighMixture& mix, RngStream& rng) {
  mix.validate();
  std::exponential_distribution<double> prior(1.0 / mix.mean_noncentrality_half);
  const double half_noncentrality = prior(rng);
  return sample_ncx2({mix.half_dof, 2.0 * half_noncentrality}, rng);
}

}  // namespace fdcrn::specfun
