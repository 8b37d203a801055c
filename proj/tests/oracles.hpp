#pragma once

// Reference computations for tests only. Deliberately simple and slow:
// adaptive Simpson, plain power series, Monte Carlo summaries, bisection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  const double floor = 1e-15 * std::abs(left + right);
  if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, floor)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson over [a, b], split into `pieces` equal panels first.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int pieces = 64) {
  double total = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == pieces) ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_step(f, lo, hi, flo, fmid, fhi, whole, tol / pieces, 30);
  }
  return total;
}

/// I_n(x) = Σ_k (x/2)^{2k+n} / (k! (k+n)!), summed in long double.
inline double bessel_i_series(int n, double x) {
  long double half = 0.5L * x;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / i;
  long double sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= half * half / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (term < sum * 1e-19L) break;
  }
  return static_cast<double>(sum);
}

/// Regularized lower incomplete gamma P(a, x) from its power series (long double).
inline long double gamma_p_series(long double a, long double x) {
  if (x <= 0.0L) return 0.0L;
  long double term = 1.0L / a;
  long double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-20L) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Noncentral chi-square CDF with 2m degrees of freedom: Poisson mixture of
/// central CDFs, summed forward from j = 0.
inline double ncx2_cdf_series(int m, double lambda, double y) {
  if (y <= 0.0) return 0.0;
  const long double mu = 0.5L * lambda;
  long double sum = 0.0L;
  for (int j = 0; j < 20000; ++j) {
    const long double w =
        std::exp(-mu + (j == 0 ? 0.0L : j * std::log(mu)) - std::lgamma(j + 1.0L));
    sum += w * gamma_p_series(m + j, 0.5L * y);
    if (j > mu && w < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

/// Smallest x in [lo, hi] with g(x) >= 0 for nondecreasing g (bisection).
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-12) {
  while (hi - lo > tol * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Proportion {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Fraction of samples <= y with its binomial standard error.
inline Proportion fraction_below(const std::vector<double>& samples, double y) {
  std::size_t hits = 0;
  for (double s : samples) hits += s <= y ? 1 : 0;
  const double n = static_cast<double>(samples.size());
  const double p = hits / n;
  return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n)};
}

}  // namespace oracle
