#include "fdcrn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace fdcrn::quadrature {
namespace {

// 15-point Kronrod nodes on [-1, 1]; odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {kronrod * half, gauss * half};
}

void refine(const std::function<double(double)>& f, double lo, double hi, double tol,
            int depth, Estimate& acc) {
  const Panel p = gauss_kronrod(f, lo, hi);
  acc.evaluations += 15;
  const double err = std::abs(p.kronrod - p.gauss);
  if (err <= tol || depth <= 0 || !(hi - lo > 4.0 * std::abs(lo) * 1e-15)) {
    acc.value += p.kronrod;
    acc.error += err;
    return;
  }
  const double mid = 0.5 * (lo + hi);
  refine(f, lo, mid, 0.5 * tol, depth - 1, acc);
  refine(f, mid, hi, 0.5 * tol, depth - 1, acc);
}

}  // namespace

Estimate integrate(const std::function<double(double)>& f, double lo, double hi,
                   double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
  Estimate acc;
  if (hi == lo) return acc;
  if (hi < lo) {
    acc = integrate(f, hi, lo, abs_tol, max_depth);
    acc.value = -acc.value;
    return acc;
  }
  refine(f, lo, hi, abs_tol, max_depth, acc);
  return acc;
}

Estimate integrate(const std::function<double(double)>& f, double lo, double hi,
                   std::span<const double> breakpoints, double abs_tol, int max_depth) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Estimate total;
  const double share = abs_tol / static_cast<double>(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Estimate part = integrate(f, cuts[i], cuts[i + 1], share, max_depth);
    total.value += part.value;
    total.error += part.error;
    total.evaluations += part.evaluations;
  }
  return total;
}

}  // namespace fdcrn::quadrature
