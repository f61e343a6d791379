#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mtilt/errors.hpp"
#include "mtilt/normal.hpp"
#include "mtilt/quadrature.hpp"
#include "mtilt/summation.hpp"

namespace {

// Values computed with a 40-digit arbitrary-precision evaluation of
// erfc(x / sqrt(2)) / 2, rounded to nearest double.
struct TailPoint {
  double x;
  double tail;
};
constexpr TailPoint kTailTable[] = {
    {0.0, 0.5},
    {0.5, 0.3085375387259869},
    {1.0, 0.15865525393145705},
    {2.0, 0.02275013194817921},
    {3.0, 0.0013498980316300946},
    {5.0, 2.866515718791939e-07},
    {8.0, 6.220960574271784e-16},
    {10.0, 7.619853024160525e-24},
    {20.0, 2.7536241186062337e-89},
    {30.0, 4.906713927148187e-198},
    {37.0, 5.725571222524577e-300},
};

constexpr TailPoint kLogTailTable[] = {
    {20.0, -203.91715537109727},
    {50.0, -1254.8313611394199},
    {100.0, -5005.524208694205},
    {1000.0, -500007.82669481216},
};

// Independent small-x oracle: the Taylor expansion of the central integral,
// int_0^x exp(-t^2/2) dt = sum_k (-1)^k x^(2k+1) / (2^k k! (2k+1)), evaluated
// in extended precision. For x <= 4 the absolute error is ~1e-18.
long double tail_taylor(long double x) {
  const long double sqrt2pi = sqrtl(2.0L * 3.14159265358979323846264338327950288L);
  long double term = x;
  long double sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= -x * x / (2.0L * k);
    const long double contrib = term / (2.0L * k + 1.0L);
    sum += contrib;
    if (fabsl(contrib) < 1e-24L) break;
  }
  return 0.5L - sum / sqrt2pi;
}

// Independent large-x oracle: the divergent asymptotic expansion
// phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...), truncated at the smallest term, in
// extended precision. For x >= 20 the truncation error is below 1e-18
// relative.
long double tail_series(long double x) {
  const long double sqrt2pi = sqrtl(2.0L * 3.14159265358979323846264338327950288L);
  const long double pdf = expl(-0.5L * x * x) / sqrt2pi;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double prev = 1e30L;
  for (int k = 1; k < 400; ++k) {
    term *= -(2.0L * k - 1.0L) / (x * x);
    if (fabsl(term) >= prev) break;
    sum += term;
    prev = fabsl(term);
    if (fabsl(term) < 1e-22L * sum) break;
  }
  return pdf / x * sum;
}

}  // namespace

TEST_CASE("tail values against the high-precision table") {
  for (const auto& p : kTailTable) {
    CAPTURE(p.x);
    const double got = mtilt::normal_tail(p.x);
    if (p.x <= 8.0) CHECK(std::fabs(got - p.tail) <= 1e-14);
    if (p.x >= 2.0) CHECK(std::fabs(got / p.tail - 1.0) <= 1e-12);
  }
}

TEST_CASE("tail values against the central Taylor series") {
  for (double x : {0.25, 0.75, 1.5, 2.5, 3.5}) {
    CAPTURE(x);
    const double oracle =
        static_cast<double>(tail_taylor(static_cast<long double>(x)));
    CHECK(std::fabs(mtilt::normal_tail(x) - oracle) <= 1e-15);
    CHECK(std::fabs(mtilt::normal_tail(-x) - (1.0 - oracle)) <= 1e-14);
  }
}

TEST_CASE("quadrature of the density reproduces the tail") {
  const double integral =
      mtilt::integrate([](double t) { return mtilt::normal_pdf(t); }, 0.0, 1.5);
  CHECK(std::fabs(mtilt::normal_tail(1.5) - (0.5 - integral)) <= 5e-12);
}

TEST_CASE("tail values against the asymptotic series") {
  for (double x : {12.0, 20.0, 25.0, 30.0, 37.0}) {
    CAPTURE(x);
    const long double oracle = tail_series(static_cast<long double>(x));
    const double got = mtilt::normal_tail(x);
    CHECK(std::fabs(static_cast<double>(got / oracle) - 1.0) <= 1e-12);
  }
}

TEST_CASE("log tail against the high-precision table and the linear tail") {
  for (const auto& p : kLogTailTable) {
    CAPTURE(p.x);
    CHECK(mtilt::log_normal_tail(p.x) ==
          doctest::Approx(p.tail).epsilon(1e-12));
  }
  for (double x : {1.0, 5.0, 10.0, 20.0, 30.0}) {
    CAPTURE(x);
    const double lt = mtilt::log_normal_tail(x);
    CHECK(std::fabs(lt - std::log(mtilt::normal_tail(x))) <=
          1e-10 * std::fabs(lt) + 1e-12);
  }
}

TEST_CASE("symmetry, cdf consistency, and the density at zero") {
  CHECK(mtilt::normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(mtilt::normal_tail(0.0) == 0.5);
  CHECK(mtilt::normal_cdf(0.0) == 0.5);
  for (double x = -8.0; x <= 8.0; x += 0.5) {
    CAPTURE(x);
    CHECK(std::fabs(mtilt::normal_tail(-x) + mtilt::normal_tail(x) - 1.0) <= 1e-15);
    CHECK(std::fabs(mtilt::normal_cdf(x) + mtilt::normal_tail(x) - 1.0) <= 1e-15);
  }
}

TEST_CASE("tail is strictly decreasing until it underflows") {
  // Below about -8.5 the tail saturates at the largest double below 1, so the
  // strict scan starts where values are still distinguishable.
  double weak_prev = mtilt::normal_tail(-12.0);
  for (double x = -11.75; x <= -8.25; x += 0.25) {
    CAPTURE(x);
    const double cur = mtilt::normal_tail(x);
    CHECK(cur <= weak_prev);
    weak_prev = cur;
  }
  double prev = mtilt::normal_tail(-8.25);
  for (double x = -8.0; x <= 38.0; x += 0.25) {
    CAPTURE(x);
    const double cur = mtilt::normal_tail(x);
    CHECK(cur < prev);
    prev = cur;
  }
  // Past the representable range the function pins at zero instead of
  // returning garbage.
  CHECK(mtilt::normal_tail(39.0) == 0.0);
  CHECK(mtilt::normal_tail(1000.0) == 0.0);
}

TEST_CASE("Mills ratio at x = 30") {
  // True deviation of the Mills ratio from 1 at x = 30 is 1.107e-3; the series
  // below reproduces it to much higher accuracy than the sanity band.
  const double x = 30.0;
  const double mills = mtilt::normal_tail(x) * std::sqrt(2.0 * 3.141592653589793) *
                       x * std::exp(0.5 * x * x);
  CHECK(std::fabs(mills - 1.0) <= 1.25e-3);
  const long double series_mills =
      tail_series(30.0L) / (expl(-0.5L * 900.0L) /
                            sqrtl(2.0L * 3.14159265358979323846264338327950288L)) *
      30.0L;
  CHECK(std::fabs(mills - static_cast<double>(series_mills)) <= 1e-5);
}

TEST_CASE("quadrature handles polynomials, oscillation, and bad input") {
  CHECK(mtilt::integrate([](double t) { return t * t; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(mtilt::integrate([](double t) { return std::sin(t); }, 0.0,
                         3.141592653589793) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mtilt::integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(mtilt::integrate([](double t) { return t; }, 1.0, 0.0),
                  mtilt::InvalidInputError);
  // An integrable singularity at an irrational point never lands on a node,
  // so refinement stalls and must be reported rather than returned.
  CHECK_THROWS_AS(mtilt::integrate(
                      [](double t) { return 1.0 / std::sqrt(std::fabs(t - 0.3183098861837907)); },
                      0.0, 1.0),
                  mtilt::PrecisionError);
}

TEST_CASE("compensated summation survives cancellation") {
  mtilt::CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);

  mtilt::CompensatedSum tenths;
  for (int i = 0; i < 10; ++i) tenths += 0.1;
  CHECK(tenths.value() == 1.0);

  mtilt::CompensatedSum seeded(2.5);
  seeded.add(0.5);
  CHECK(seeded.value() == 3.0);
}
