#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>

namespace fdcrn::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi].
///
/// Intervals are bisected until the Kronrod/Gauss difference on each one is
/// below its share of abs_tol, or max_depth is reached.
Estimate integrate(const std::function<double(double)>& f, double lo, double hi,
                   double abs_tol = 1e-10, int max_depth = 40);

/// Integrates over [lo, hi] after splitting at the given interior breakpoints.
Estimate integrate(const std::function<double(double)>& f, double lo, double hi,
                   std::span<const double> breakpoints, double abs_tol = 1e-10,
                   int max_depth = 40);

}  // namespace fdcrn::quadrature
