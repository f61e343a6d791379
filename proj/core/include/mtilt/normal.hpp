#pragma once

namespace mtilt {

double normal_pdf(double x);

double normal_cdf(double x);

// Upper tail 1 - Phi(x), evaluated through the complementary error function in
// extended precision so there is no cancellation for positive x. Accurate to
// full double precision over the whole range where the result is
// representable; beyond x ~ 38.4 the true value is below the smallest double
// and 0 is returned.
double normal_tail(double x);

// log(1 - Phi(x)) without underflow, usable far beyond the range where
// normal_tail itself is representable.
double log_normal_tail(double x);

}  // namespace mtilt
