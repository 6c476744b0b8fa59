#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amgm/errors.hpp"
#include "amgm/summation.hpp"

namespace amgm {

/// Accepted slack on the sum of a weight vector.
inline constexpr double kWeightSumTol = 1e-12;

/// A two-pass variance this far below zero (relative to E[y^2]) is treated
/// as rounding and clamped; anything lower is an internal error.
inline constexpr double kVarianceClampRel = 1e-15;

namespace detail {

template <std::floating_point Real>
std::pair<Real, Real> min_max(std::span<const Real> v) {
  Real lo = v[0], hi = v[0];
  for (Real x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

inline void require_same_size(std::size_t a, std::size_t b) {
  if (a != b)
    throw DimensionError("vector lengths do not match: " + std::to_string(a) +
                         " vs " + std::to_string(b));
}

}  // namespace detail

/// Strictly positive weights over n >= 2 indices summing to 1 (within
/// kWeightSumTol). Immutable after construction.
template <std::floating_point Real = double>
class WeightVector {
 public:
  explicit WeightVector(std::vector<Real> weights)
      : weights_(std::move(weights)) {
    if (weights_.size() < 2)
      throw DomainError("weight vector needs at least 2 entries");
    CompensatedSum<Real> total;
    min_ = weights_[0];
    for (Real w : weights_) {
      if (!std::isfinite(w) || w <= Real(0))
        throw DomainError("weights must be finite and strictly positive");
      total.add(w);
      min_ = std::min(min_, w);
    }
    if (std::abs(total.value() - Real(1)) > Real(kWeightSumTol))
      throw DomainError(
          "weights must sum to 1 within 1e-12; use WeightVector::normalized "
          "to rescale");
  }

  /// Rescales arbitrary positive weights so they sum to 1.
  static WeightVector normalized(std::vector<Real> raw) {
    if (raw.size() < 2)
      throw DomainError("weight vector needs at least 2 entries");
    CompensatedSum<Real> total;
    for (Real w : raw) {
      if (!std::isfinite(w) || w <= Real(0))
        throw DomainError("weights must be finite and strictly positive");
      total.add(w);
    }
    const Real t = total.value();
    if (!std::isfinite(t) || t <= Real(0))
      throw DomainError("weight total must be finite and positive");
    for (Real& w : raw) w /= t;
    return WeightVector(std::move(raw));
  }

  /// Equal weights (1/n, ..., 1/n).
  static WeightVector uniform(std::size_t n) {
    if (n < 2) throw DomainError("weight vector needs at least 2 entries");
    return WeightVector(std::vector<Real>(n, Real(1) / static_cast<Real>(n)));
  }

  std::size_t size() const { return weights_.size(); }
  Real operator[](std::size_t i) const { return weights_[i]; }
  std::span<const Real> values() const { return weights_; }

  /// Smallest weight; drives both sharp constants of the gap sandwich.
  Real min() const { return min_; }

 private:
  std::vector<Real> weights_;
  Real min_;
};

/// Non-negative data over n >= 2 indices. Strict positivity is a separate
/// refinement checked by the operations that need it.
template <std::floating_point Real = double>
class DataVector {
 public:
  explicit DataVector(std::vector<Real> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2)
      throw DomainError("data vector needs at least 2 entries");
    min_ = max_ = entries_[0];
    for (Real x : entries_) {
      if (!std::isfinite(x) || x < Real(0))
        throw DomainError("data entries must be finite and non-negative");
      min_ = std::min(min_, x);
      max_ = std::max(max_, x);
    }
  }

  std::size_t size() const { return entries_.size(); }
  Real operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Real> values() const { return entries_; }
  Real min() const { return min_; }
  Real max() const { return max_; }

 private:
  std::vector<Real> entries_;
  Real min_;
  Real max_;
};

/// E_a(y): weighted arithmetic mean. Defined for vectors of either sign;
/// the result is clamped into [min(y), max(y)], where it lies exactly.
template <std::floating_point Real>
Real weighted_mean(std::span<const Real> y, const WeightVector<Real>& a) {
  detail::require_same_size(y.size(), a.size());
  const auto [lo, hi] = detail::min_max(y);
  if (lo == hi) return lo;
  CompensatedSum<Real> s;
  for (std::size_t i = 0; i < y.size(); ++i) s.add(a[i] * y[i]);
  return std::clamp(s.value(), lo, hi);
}

template <std::floating_point Real>
Real weighted_mean(const DataVector<Real>& x, const WeightVector<Real>& a) {
  return weighted_mean(x.values(), a);
}

namespace detail {

// Geometric mean of a validated non-negative range with min/max known.
template <std::floating_point Real>
Real geometric_mean_kernel(std::span<const Real> x, const WeightVector<Real>& a,
                           Real lo, Real hi) {
  if (lo == Real(0)) return 0;
  if (lo == hi) return lo;
  CompensatedSum<Real> s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add(a[i] * std::log(x[i]));
  return std::clamp(std::exp(s.value()), lo, hi);
}

}  // namespace detail

/// Pi_a(x): weighted geometric mean, exp(sum a_i ln x_i) for positive data;
/// exactly 0 when any entry is 0.
template <std::floating_point Real>
Real weighted_geometric_mean(const DataVector<Real>& x,
                             const WeightVector<Real>& a) {
  detail::require_same_size(x.size(), a.size());
  return detail::geometric_mean_kernel(x.values(), a, x.min(), x.max());
}

/// Var_a(y) by the centered two-pass formula. Tiny negative results from
/// rounding clamp to 0; anything below -kVarianceClampRel * E[y^2] throws.
template <std::floating_point Real>
Real weighted_variance(std::span<const Real> y, const WeightVector<Real>& a) {
  detail::require_same_size(y.size(), a.size());
  const auto [lo, hi] = detail::min_max(y);
  if (lo == hi) return 0;
  const Real m = weighted_mean(y, a);
  CompensatedSum<Real> dev2, sq;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Real d = y[i] - m;
    dev2.add(a[i] * d * d);
    sq.add(a[i] * y[i] * y[i]);
  }
  const Real v = dev2.value();
  if (v < Real(0)) {
    if (v >= -Real(kVarianceClampRel) * sq.value()) return 0;
    throw InternalError("two-pass variance went negative beyond rounding");
  }
  return v;
}

template <std::floating_point Real>
Real weighted_variance(const DataVector<Real>& y, const WeightVector<Real>& a) {
  return weighted_variance(y.values(), a);
}

/// Elementwise square root X^{1/2}.
template <std::floating_point Real>
DataVector<Real> sqrt_transform(const DataVector<Real>& x) {
  std::vector<Real> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::sqrt(x[i]);
  return DataVector<Real>(std::move(r));
}

/// sigma_a(y): square root of the weighted variance.
template <std::floating_point Real>
Real std_dev(std::span<const Real> y, const WeightVector<Real>& a) {
  return std::sqrt(weighted_variance(y, a));
}

template <std::floating_point Real>
Real std_dev(const DataVector<Real>& x, const WeightVector<Real>& a) {
  return std_dev(x.values(), a);
}

}  // namespace amgm
