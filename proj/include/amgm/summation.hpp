#pragma once

#include <cmath>
#include <concepts>
#include <span>

namespace amgm {

/// Kahan-Babuska (Neumaier) compensated accumulator. One extra add per
/// term buys ~eps relative error independent of the number of terms.
template <std::floating_point Real = double>
class CompensatedSum {
 public:
  void add(Real value) {
    const Real t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

template <std::floating_point Real>
Real compensated_total(std::span<const Real> values) {
  CompensatedSum<Real> s;
  for (Real v : values) s.add(v);
  return s.value();
}

template <std::floating_point Real>
Real compensated_dot(std::span<const Real> a, std::span<const Real> b) {
  CompensatedSum<Real> s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

}  // namespace amgm
