#ifndef MGFNORM_DETAIL_SUMMATION_HPP
#define MGFNORM_DETAIL_SUMMATION_HPP

#include <cmath>

namespace mgfnorm::detail {

// Neumaier-compensated running sum. Order of add() calls fixes the result
// bit-for-bit, so callers iterate in a fixed order.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    using std::abs;
    const Scalar t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Scalar x) {
    add(x);
    return *this;
  }

  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

}  // namespace mgfnorm::detail

#endif  // MGFNORM_DETAIL_SUMMATION_HPP
