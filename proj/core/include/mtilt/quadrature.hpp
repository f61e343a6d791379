#pragma once

#include <cmath>

#include "mtilt/errors.hpp"

namespace mtilt {

namespace quadrature_detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename F>
void gk15(F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kNodes[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    k += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1) g += kGaussWeights[(j - 1) / 2] * (f1 + f2);
  }
  kronrod = k * h;
  err = std::fabs((k - g) * h);
}

template <typename F>
double adaptive(F& f, double a, double b, double tol, int depth) {
  double k, err;
  gk15(f, a, b, k, err);
  if (err <= tol || !(std::isfinite(k))) return k;
  if (depth >= 48) {
    throw PrecisionError("quadrature failed to reach the requested tolerance");
  }
  const double c = 0.5 * (a + b);
  return adaptive(f, a, c, 0.5 * tol, depth + 1) +
         adaptive(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace quadrature_detail

// Adaptive Gauss-Kronrod integration of f over [a, b] to an absolute
// tolerance. Meant for smooth integrands (densities times polynomials or
// exponentials); throws PrecisionError if refinement stalls.
template <typename F>
double integrate(F f, double a, double b, double abs_tol = 1e-12) {
  if (!(a <= b)) throw InvalidInputError("integration bounds out of order");
  if (a == b) return 0.0;
  return quadrature_detail::adaptive(f, a, b, abs_tol, 0);
}

}  // namespace mtilt
