#include "mtilt/normal.hpp"

#include <cmath>

namespace mtilt {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr long double kLogSqrt2Pi = 0.91893853320467274178L;

// Mills ratio (1 - Phi(x)) / phi(x) as the classic continued fraction
// 1 / (x + 1/(x + 2/(x + 3/(x + ...)))), evaluated with the modified Lentz
// scheme. Converges quickly for x >= 8, where erfc is close to underflow.
long double mills_ratio(long double x) {
  constexpr long double kTiny = 1e-30L;
  long double f = x;
  long double c = x;
  long double d = 0.0L;
  for (int k = 1; k < 400; ++k) {
    const long double a = static_cast<long double>(k);
    d = x + a * d;
    if (d == 0.0L) d = kTiny;
    c = x + a / c;
    if (c == 0.0L) c = kTiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-20L) break;
  }
  return 1.0L / f;
}

}  // namespace

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / 2.5066282746310002;
}

double normal_cdf(double x) {
  return 0.5 * static_cast<double>(erfcl(-static_cast<long double>(x) / kSqrt2));
}

double normal_tail(double x) {
  return 0.5 * static_cast<double>(erfcl(static_cast<long double>(x) / kSqrt2));
}

double log_normal_tail(double x) {
  const long double xl = static_cast<long double>(x);
  if (x <= 8.0) {
    return static_cast<double>(logl(0.5L * erfcl(xl / kSqrt2)));
  }
  // log phi(x) + log Mills(x); exact in long double far past double range.
  return static_cast<double>(-0.5L * xl * xl - kLogSqrt2Pi +
                             logl(mills_ratio(xl)));
}

}  // namespace mtilt
