#pragma once

#include <cmath>

namespace mtilt {

// Neumaier-compensated accumulator. Running sums of many small increments
// (partial sums, quadratic characteristics, log weights) stay accurate to one
// rounding of the true sum, and the result depends only on the order of the
// additions, never on how work was split across threads.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace mtilt
