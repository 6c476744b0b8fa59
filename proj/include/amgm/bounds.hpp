#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amgm/errors.hpp"
#include "amgm/means.hpp"
#include "amgm/summation.hpp"

namespace amgm {

/// Relative tolerance at which a produced report must satisfy
/// lower <= gap <= upper; a report outside it is an InternalError.
inline constexpr double kSandwichRelTol = 1e-10;

/// Relative slack under which a bound is flagged as attained.
inline constexpr double kTightRelTol = 1e-9;

enum class Method {
  Theorem,
  CartwrightField,
  CrossWeight,
  RefinedYoung,
  WeightChange,
  VarianceComparison,
};

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Theorem: return "theorem";
    case Method::CartwrightField: return "cartwright-field";
    case Method::CrossWeight: return "cross-weight";
    case Method::RefinedYoung: return "refined-young";
    case Method::WeightChange: return "weight-change";
    case Method::VarianceComparison: return "variance-comparison";
  }
  return "unknown";
}

inline std::optional<Method> method_from_string(std::string_view s) {
  for (Method m : {Method::Theorem, Method::CartwrightField,
                   Method::CrossWeight, Method::RefinedYoung,
                   Method::WeightChange, Method::VarianceComparison})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

/// A certified two-sided estimate. For every method except
/// VarianceComparison, `gap` is E_a(X) - Pi_a(X); VarianceComparison reuses
/// the field for Var_a(Y), disambiguated by `method`.
template <std::floating_point Real = double>
struct BoundReport {
  Real gap;
  Real lower;
  Real upper;
  Real slack_lower;   // gap - lower
  Real slack_upper;   // upper - gap
  bool tight_lower;
  bool tight_upper;
  Method method;
};

namespace detail {

template <std::floating_point Real>
BoundReport<Real> make_report(Real gap, Real lower, Real upper, Method method) {
  const Real scale = std::max(Real(1), gap);
  if (lower - gap > Real(kSandwichRelTol) * scale ||
      gap - upper > Real(kSandwichRelTol) * scale)
    throw InternalError("bound sandwich violated by method '" +
                        std::string(to_string(method)) + "'");
  BoundReport<Real> r;
  r.gap = gap;
  r.lower = lower;
  r.upper = upper;
  r.slack_lower = gap - lower;
  r.slack_upper = upper - gap;
  r.tight_lower = r.slack_lower <= Real(kTightRelTol) * scale;
  r.tight_upper = r.slack_upper <= Real(kTightRelTol) * scale;
  r.method = method;
  return r;
}

// E_a(x) - Pi_a(x) for validated non-negative data, evaluated relative to
// x_min: with d_i = x_i/x_min - 1,
//   gap = x_min * (sum a_i d_i - expm1(sum a_i log1p d_i)).
// This keeps the subtraction well-conditioned when the entries are nearly
// equal, where forming the two means separately cancels catastrophically.
template <std::floating_point Real>
Real gap_kernel(std::span<const Real> x, const WeightVector<Real>& a, Real lo,
                Real hi) {
  if (lo == hi) return 0;
  if (lo == Real(0)) return weighted_mean(x, a);
  CompensatedSum<Real> excess, logs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Real d = x[i] / lo - Real(1);
    excess.add(a[i] * d);
    logs.add(a[i] * std::log1p(d));
  }
  return lo * (excess.value() - std::expm1(logs.value()));
}

template <std::floating_point Real>
std::vector<Real> sqrt_values(std::span<const Real> x) {
  std::vector<Real> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::sqrt(x[i]);
  return r;
}

// min_k a_k/b_k and max_k a_k/b_k.
template <std::floating_point Real>
std::pair<Real, Real> weight_ratio_range(const WeightVector<Real>& a,
                                         const WeightVector<Real>& b) {
  Real rmin = a[0] / b[0], rmax = rmin;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const Real q = a[i] / b[i];
    rmin = std::min(rmin, q);
    rmax = std::max(rmax, q);
  }
  return {rmin, rmax};
}

}  // namespace detail

/// The AM-GM gap E_a(X) - Pi_a(X); non-negative up to rounding.
template <std::floating_point Real>
Real amgm_gap(const DataVector<Real>& x, const WeightVector<Real>& a) {
  detail::require_same_size(x.size(), a.size());
  return detail::gap_kernel(x.values(), a, x.min(), x.max());
}

/// Sharp sandwich of the gap by Var_a(X^{1/2}):
///   Var/(1 - a_min) <= gap <= Var/a_min.
/// Zeros in X are allowed.
template <std::floating_point Real>
BoundReport<Real> theorem_bounds(const DataVector<Real>& x,
                                 const WeightVector<Real>& a) {
  detail::require_same_size(x.size(), a.size());
  const Real gap = detail::gap_kernel(x.values(), a, x.min(), x.max());
  const std::vector<Real> roots = detail::sqrt_values(x.values());
  const Real v = weighted_variance(std::span<const Real>(roots), a);
  const Real amin = a.min();
  return detail::make_report(gap, v / (Real(1) - amin), v / amin,
                             Method::Theorem);
}

/// Two evaluation routes of the same n=2 quantity:
///   lhs = (x+y)/2 - sqrt(xy), rhs = 2 Var((sqrt x, sqrt y)).
/// They agree identically in exact arithmetic.
template <std::floating_point Real = double>
struct N2IdentityResult {
  Real lhs;
  Real rhs;
};

template <std::floating_point Real>
N2IdentityResult<Real> n2_identity_check(Real x, Real y) {
  if (!std::isfinite(x) || !std::isfinite(y) || x < Real(0) || y < Real(0))
    throw DomainError("n2 identity requires finite non-negative inputs");
  const Real lhs = (x + y) / Real(2) - std::sqrt(x * y);
  const std::vector<Real> roots{std::sqrt(x), std::sqrt(y)};
  const Real var =
      weighted_variance(std::span<const Real>(roots), WeightVector<Real>::uniform(2));
  return {lhs, Real(2) * var};
}

/// Refined Young sandwich for a in (0, 1/2]:
///   2a B <= a x + (1-a) y - x^a y^(1-a) <= 2(1-a) B,
/// with B = (x+y)/2 - sqrt(xy). The smaller weight must multiply x; use
/// refined_young_bounds_oriented when the orientation is not known.
template <std::floating_point Real>
BoundReport<Real> refined_young_bounds(Real x, Real y, Real a) {
  if (!std::isfinite(x) || !std::isfinite(y) || x < Real(0) || y < Real(0))
    throw DomainError("refined Young requires finite non-negative x, y");
  if (!(a > Real(0)) || a > Real(0.5))
    throw DomainError(
        "refined Young requires a in (0, 1/2]; orient the pair so the "
        "smaller weight multiplies x, or call refined_young_bounds_oriented");
  Real power;
  if (x == Real(0) || y == Real(0)) {
    power = 0;
  } else if (a == Real(0.5)) {
    power = std::sqrt(x * y);
  } else {
    power = std::exp(a * std::log(x) + (Real(1) - a) * std::log(y));
  }
  const Real gap = a * x + (Real(1) - a) * y - power;
  const Real base = (x + y) / Real(2) - std::sqrt(x * y);
  return detail::make_report(gap, Real(2) * a * base,
                             Real(2) * (Real(1) - a) * base,
                             Method::RefinedYoung);
}

/// Accepts any a in (0, 1); swaps the pair when a > 1/2 so the lemma's
/// orientation requirement is met.
template <std::floating_point Real>
BoundReport<Real> refined_young_bounds_oriented(Real x, Real y, Real a) {
  if (!(a > Real(0)) || !(a < Real(1)))
    throw DomainError("weight a must lie in (0, 1)");
  if (a > Real(0.5)) return refined_young_bounds(y, x, Real(1) - a);
  return refined_young_bounds(x, y, a);
}

/// Classical sandwich by Var_a(X) with constants 1/(2 X_max), 1/(2 X_min).
/// Requires strictly positive data.
template <std::floating_point Real>
BoundReport<Real> cartwright_field_bounds(const DataVector<Real>& x,
                                          const WeightVector<Real>& a) {
  detail::require_same_size(x.size(), a.size());
  if (x.min() <= Real(0))
    throw PreconditionError(
        "X_min must be > 0 for cartwright-field; use the theorem bounds for "
        "data with zeros");
  const Real gap = detail::gap_kernel(x.values(), a, x.min(), x.max());
  const Real v = weighted_variance(x.values(), a);
  return detail::make_report(gap, v / (Real(2) * x.max()),
                             v / (Real(2) * x.min()), Method::CartwrightField);
}

/// Brackets the gap under weights a by the gap under weights b scaled by
/// the extreme coordinate ratios of a against b.
template <std::floating_point Real>
BoundReport<Real> weight_change_gap_bounds(const DataVector<Real>& x,
                                           const WeightVector<Real>& a,
                                           const WeightVector<Real>& b) {
  detail::require_same_size(x.size(), a.size());
  detail::require_same_size(x.size(), b.size());
  const Real gap_a = detail::gap_kernel(x.values(), a, x.min(), x.max());
  const Real gap_b = detail::gap_kernel(x.values(), b, x.min(), x.max());
  const auto [rmin, rmax] = detail::weight_ratio_range(a, b);
  return detail::make_report(gap_a, rmin * gap_b, rmax * gap_b,
                             Method::WeightChange);
}

/// Dragomir-Jensen variance comparison,
///   rmin Var_b(Y) <= Var_a(Y) <= rmax Var_b(Y),
/// valid for Y of any sign; the report's gap field carries Var_a(Y).
template <std::floating_point Real>
BoundReport<Real> variance_comparison(std::span<const Real> y,
                                      const WeightVector<Real>& a,
                                      const WeightVector<Real>& b) {
  detail::require_same_size(y.size(), a.size());
  detail::require_same_size(y.size(), b.size());
  const Real va = weighted_variance(y, a);
  const Real vb = weighted_variance(y, b);
  const auto [rmin, rmax] = detail::weight_ratio_range(a, b);
  return detail::make_report(va, rmin * vb, rmax * vb,
                             Method::VarianceComparison);
}

template <std::floating_point Real>
BoundReport<Real> variance_comparison(const DataVector<Real>& y,
                                      const WeightVector<Real>& a,
                                      const WeightVector<Real>& b) {
  return variance_comparison(y.values(), a, b);
}

/// Brackets the gap under weights a by Var_b(X^{1/2}):
///   lower = rmin * max{1/(1-a_min), 1/(1-b_min)} * Var_b(X^{1/2}),
///   upper = rmax * min{1/a_min, 1/b_min} * Var_b(X^{1/2}).
template <std::floating_point Real>
BoundReport<Real> cross_weight_bounds(const DataVector<Real>& x,
                                      const WeightVector<Real>& a,
                                      const WeightVector<Real>& b) {
  detail::require_same_size(x.size(), a.size());
  detail::require_same_size(x.size(), b.size());
  const Real gap_a = detail::gap_kernel(x.values(), a, x.min(), x.max());
  const std::vector<Real> roots = detail::sqrt_values(x.values());
  const Real vb = weighted_variance(std::span<const Real>(roots), b);
  const auto [rmin, rmax] = detail::weight_ratio_range(a, b);
  const Real lo_factor =
      std::max(Real(1) / (Real(1) - a.min()), Real(1) / (Real(1) - b.min()));
  const Real hi_factor = std::min(Real(1) / a.min(), Real(1) / b.min());
  return detail::make_report(gap_a, rmin * lo_factor * vb,
                             rmax * hi_factor * vb, Method::CrossWeight);
}

}  // namespace amgm
