#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "amgm/bounds.hpp"
#include "amgm/errors.hpp"
#include "amgm/summation.hpp"

namespace amgm {

/// Accepted slack on sum 1/p_i = 1.
inline constexpr double kExponentSumTol = 1e-12;

/// Exponents above this overflow f^{p/2} in double precision.
inline constexpr double kMaxExponent = 1e6;

/// A discrete measure (points with non-negative masses of positive finite
/// total) carrying n >= 2 non-negative functions f_i with conjugate
/// exponents p_i in (1, kMaxExponent], sum 1/p_i = 1, and ||f_i||_{p_i} > 0.
template <std::floating_point Real = double>
class SampledFunctionSet {
 public:
  SampledFunctionSet(std::vector<Real> masses,
                     std::vector<std::vector<Real>> functions,
                     std::vector<Real> exponents)
      : masses_(std::move(masses)),
        functions_(std::move(functions)),
        exponents_(std::move(exponents)) {
    if (masses_.empty()) throw DomainError("measure needs at least one point");
    if (functions_.size() < 2)
      throw DomainError("need at least 2 functions");
    if (exponents_.size() != functions_.size())
      throw DimensionError("one exponent per function required");

    CompensatedSum<Real> mass_total;
    for (Real m : masses_) {
      if (!std::isfinite(m) || m < Real(0))
        throw DomainError("masses must be finite and non-negative");
      mass_total.add(m);
    }
    total_mass_ = mass_total.value();
    if (!std::isfinite(total_mass_) || total_mass_ <= Real(0))
      throw DomainError("total mass must be finite and positive");

    CompensatedSum<Real> inv_total;
    p_max_ = exponents_[0];
    for (Real p : exponents_) {
      if (!std::isfinite(p) || p <= Real(1) || p > Real(kMaxExponent))
        throw DomainError("exponents must lie in (1, 1e6]");
      inv_total.add(Real(1) / p);
      p_max_ = std::max(p_max_, p);
    }
    if (std::abs(inv_total.value() - Real(1)) > Real(kExponentSumTol))
      throw DomainError("exponents must satisfy sum(1/p_i) = 1 within 1e-12");

    for (const auto& f : functions_) {
      if (f.size() != masses_.size())
        throw DimensionError("each function must have one value per point");
      bool positive_somewhere = false;
      for (std::size_t u = 0; u < f.size(); ++u) {
        if (!std::isfinite(f[u]) || f[u] < Real(0))
          throw DomainError("function values must be finite and non-negative");
        if (masses_[u] > Real(0) && f[u] > Real(0)) positive_somewhere = true;
      }
      if (!positive_somewhere)
        throw PreconditionError(
            "every function must have ||f_i||_{p_i} > 0 on the measure");
    }
  }

  std::size_t point_count() const { return masses_.size(); }
  std::size_t function_count() const { return functions_.size(); }
  std::span<const Real> masses() const { return masses_; }
  std::span<const Real> function(std::size_t i) const { return functions_[i]; }
  std::span<const Real> exponents() const { return exponents_; }
  Real exponent(std::size_t i) const { return exponents_[i]; }
  Real p_max() const { return p_max_; }
  Real total_mass() const { return total_mass_; }

 private:
  std::vector<Real> masses_;
  std::vector<std::vector<Real>> functions_;
  std::vector<Real> exponents_;
  Real total_mass_;
  Real p_max_;
};

/// ||f_i||_{p_i} = (sum_u m_u f_i(u)^{p_i})^{1/p_i}, evaluated with the
/// values scaled by their maximum so no intermediate over- or underflows.
template <std::floating_point Real>
Real lp_norm(const SampledFunctionSet<Real>& s, std::size_t i) {
  const auto f = s.function(i);
  const auto m = s.masses();
  const Real p = s.exponent(i);
  Real fmax = 0;
  for (std::size_t u = 0; u < f.size(); ++u)
    if (m[u] > Real(0)) fmax = std::max(fmax, f[u]);
  if (fmax == Real(0)) return 0;
  CompensatedSum<Real> total;
  for (std::size_t u = 0; u < f.size(); ++u) {
    if (m[u] == Real(0) || f[u] == Real(0)) continue;
    total.add(m[u] * std::pow(f[u] / fmax, p));
  }
  return fmax * std::pow(total.value(), Real(1) / p);
}

/// Mazur images g_i = f_i^{p_i/2} / ||f_i||^{p_i/2}; each has unit L2 norm.
template <std::floating_point Real>
std::vector<std::vector<Real>> mazur_images(const SampledFunctionSet<Real>& s) {
  const std::size_t n = s.function_count();
  const std::size_t pts = s.point_count();
  std::vector<std::vector<Real>> g(n, std::vector<Real>(pts));
  for (std::size_t i = 0; i < n; ++i) {
    const Real norm = lp_norm(s, i);
    if (norm <= Real(0))
      throw PreconditionError("zero norm in Mazur map");
    const Real half_p = s.exponent(i) / Real(2);
    const auto f = s.function(i);
    for (std::size_t u = 0; u < pts; ++u)
      g[i][u] = f[u] == Real(0) ? Real(0) : std::pow(f[u] / norm, half_p);
  }
  return g;
}

/// Refined Hoelder certificate. The lower factor carries the printed
/// positive part; the upper factor is left unclamped.
template <std::floating_point Real = double>
struct HolderReport {
  Real product_norm;        // ||prod f_i||_1
  std::vector<Real> norms;  // ||f_i||_{p_i}
  Real mazur_distance;      // D = sum (1/p_i) ||g_i - h||_2^2
  Real lower;
  Real upper;
  Real classical_upper;     // prod ||f_i||_{p_i}
  bool vacuous_lower;       // 1 - p_max D <= 0, so lower clamped to 0
};

namespace detail {

// prod v_i, falling back to exp(sum log v_i) if the direct product leaves
// the finite range that the true value still occupies.
template <std::floating_point Real>
Real stable_product(const std::vector<Real>& v) {
  Real p = 1;
  for (Real x : v) p *= x;
  if (std::isfinite(p) && p > Real(0)) return p;
  CompensatedSum<Real> logs;
  for (Real x : v) {
    if (x == Real(0)) return 0;
    logs.add(std::log(x));
  }
  return std::exp(logs.value());
}

}  // namespace detail

template <std::floating_point Real>
HolderReport<Real> holder_refinement(const SampledFunctionSet<Real>& s) {
  const std::size_t n = s.function_count();
  const std::size_t pts = s.point_count();
  const auto m = s.masses();

  HolderReport<Real> rep;
  rep.norms.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.norms[i] = lp_norm(s, i);

  const auto g = mazur_images(s);

  std::vector<Real> inv_p(n);
  for (std::size_t i = 0; i < n; ++i) inv_p[i] = Real(1) / s.exponent(i);

  // D = sum_i (1/p_i) ||g_i - h||_2^2 with h = sum_k (1/p_k) g_k.
  std::vector<CompensatedSum<Real>> dev(n);
  for (std::size_t u = 0; u < pts; ++u) {
    if (m[u] == Real(0)) continue;
    CompensatedSum<Real> hu;
    for (std::size_t k = 0; k < n; ++k) hu.add(inv_p[k] * g[k][u]);
    const Real h = hu.value();
    for (std::size_t i = 0; i < n; ++i) {
      const Real d = g[i][u] - h;
      dev[i].add(m[u] * d * d);
    }
  }
  CompensatedSum<Real> dtotal;
  for (std::size_t i = 0; i < n; ++i) dtotal.add(inv_p[i] * dev[i].value());
  rep.mazur_distance = dtotal.value();

  // ||prod f_i||_1, scaled per function by its maximum value.
  std::vector<Real> fmax(n, Real(0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = s.function(i);
    for (std::size_t u = 0; u < pts; ++u)
      if (m[u] > Real(0)) fmax[i] = std::max(fmax[i], f[u]);
  }
  CompensatedSum<Real> scaled;
  for (std::size_t u = 0; u < pts; ++u) {
    if (m[u] == Real(0)) continue;
    Real prod = m[u];
    for (std::size_t i = 0; i < n; ++i) prod *= s.function(i)[u] / fmax[i];
    scaled.add(prod);
  }
  rep.product_norm = scaled.value() * detail::stable_product(fmax);

  rep.classical_upper = detail::stable_product(rep.norms);
  const Real pmax = s.p_max();
  const Real lower_factor = Real(1) - pmax * rep.mazur_distance;
  rep.vacuous_lower = lower_factor <= Real(0);
  rep.lower = rep.classical_upper * std::max(lower_factor, Real(0));
  rep.upper = rep.classical_upper *
              (Real(1) - pmax / (pmax - Real(1)) * rep.mazur_distance);

  const Real tol = Real(kSandwichRelTol) *
                   std::max(Real(1), std::abs(rep.classical_upper));
  if (rep.mazur_distance < Real(0))
    throw InternalError("Mazur distance went negative");
  if (rep.upper < -tol)
    throw InternalError("Hoelder upper bound went negative");
  if (rep.lower - rep.product_norm > tol ||
      rep.product_norm - rep.upper > tol ||
      rep.upper - rep.classical_upper > tol)
    throw InternalError("Hoelder sandwich violated");
  return rep;
}

}  // namespace amgm
