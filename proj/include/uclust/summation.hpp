#pragma once

#include <cmath>

namespace uclust {

/// Double-double accumulator built on error-free TwoSum. Adding and later
/// subtracting the same term restores the value to double-double precision,
/// so the rounded result comes back unchanged.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : hi_(v) {}

  CompensatedSum& operator+=(double x) {
    const double s = hi_ + x;
    const double bp = s - hi_;
    const double err = (hi_ - (s - bp)) + (x - bp);
    const double lo = lo_ + err;
    hi_ = s + lo;
    lo_ = lo - (hi_ - s);
    return *this;
  }
  CompensatedSum& operator-=(double x) { return *this += -x; }

  CompensatedSum& operator+=(const CompensatedSum& o) {
    *this += o.hi_;
    *this += o.lo_;
    return *this;
  }

  double value() const { return hi_ + lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

}  // namespace uclust
