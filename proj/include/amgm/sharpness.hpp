#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "amgm/bounds.hpp"
#include "amgm/errors.hpp"
#include "amgm/means.hpp"
#include "amgm/random.hpp"

namespace amgm {

/// Coordinates below this snap to exactly 0 before the geometric mean is
/// evaluated, matching the zero-coordinate form of the theorem.
inline constexpr double kBoundarySnapTol = 1e-12;

/// Points whose sqrt-variance falls below this are rejected from search
/// trajectories; the ratio is 0/0 at constant vectors.
inline constexpr double kDegenerateVarianceTol = 1e-16;

/// Search results may not cross the theoretical interval by more than this
/// relative amount.
inline constexpr double kSearchSoundnessRelTol = 1e-6;

enum class RatioDirection { Maximize, Minimize };
enum class WitnessSide { Left, Right };

template <std::floating_point Real = double>
struct SearchConfig {
  WeightVector<Real> weights;
  int n_starts = 32;
  int max_iters = 2000;
  Real step_tolerance = Real(1e-10);
  RatioDirection direction = RatioDirection::Maximize;
  std::uint64_t seed = 0;
};

template <std::floating_point Real = double>
struct SearchResult {
  Real best_ratio;
  DataVector<Real> argpoint;  // normalized so E_a(x) = 1
  Real target;                // 1/a_min or 1/(1 - a_min)
  Real relative_gap_to_target;
  long n_evaluations;
};

/// Data vector attaining equality in the equal-weight sandwich:
/// Left -> (1, 0, ..., 0) saturates the lower bound,
/// Right -> (1, ..., 1, 0) saturates the upper bound.
template <std::floating_point Real = double>
DataVector<Real> equality_witness(std::size_t n, WitnessSide side) {
  if (n < 2) throw DomainError("equality witness requires n >= 2");
  std::vector<Real> x(n, side == WitnessSide::Left ? Real(0) : Real(1));
  if (side == WitnessSide::Left) {
    x[0] = 1;
  } else {
    x[n - 1] = 0;
  }
  return DataVector<Real>(std::move(x));
}

/// (E_a(X) - Pi_a(X)) / Var_a(X^{1/2}); lies in
/// [1/(1-a_min), 1/a_min] for every non-constant X.
template <std::floating_point Real>
Real gap_variance_ratio(const DataVector<Real>& x, const WeightVector<Real>& a) {
  detail::require_same_size(x.size(), a.size());
  if (x.min() == x.max())
    throw DegenerateInputError("ratio undefined for constant data");
  const std::vector<Real> roots = detail::sqrt_values(x.values());
  const Real v = weighted_variance(std::span<const Real>(roots), a);
  if (v <= Real(0))
    throw DegenerateInputError("ratio undefined at zero variance");
  return detail::gap_kernel(x.values(), a, x.min(), x.max()) / v;
}

namespace detail {

// Coordinate-wise line search over the slice {x >= 0 : sum a_i x_i = 1}.
// The ratio is invariant under rescaling of x, so fixing all coordinates
// but one and renormalizing sweeps a full 1-D family of the slice.
template <std::floating_point Real>
class RatioSearch {
 public:
  RatioSearch(const WeightVector<Real>& weights, bool maximize, Real step_tol,
              int max_sweeps)
      : a_(weights),
        maximize_(maximize),
        step_tol_(step_tol),
        max_sweeps_(max_sweeps),
        roots_(weights.size()),
        trial_(weights.size()) {}

  long evaluations() const { return evals_; }

  // Runs one descent from `x` (overwritten with the final point) and
  // returns the signed objective at the converged point.
  Real descend(std::vector<Real>& x) {
    normalize(x);
    Real f = evaluate(x);
    for (int sweep = 0; sweep < max_sweeps_; ++sweep) {
      const Real f_before = f;
      bool accepted = false;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const Real rest = Real(1) - a_[j] * x[j];
        if (!(rest > Real(0))) continue;
        const auto [share, value] = line_search(x, j, rest, f);
        if (value > f) {
          x[j] = coordinate_for_share(share, rest, a_[j]);
          normalize(x);
          f = evaluate(x);
          accepted = true;
        }
      }
      if (!accepted) break;
      if (f - f_before <= Real(1e-14) * std::max(Real(1), std::abs(f))) break;
    }
    return f;
  }

 private:
  static constexpr Real kRejected = -std::numeric_limits<Real>::infinity();

  // Weighted share t of coordinate j -> coordinate value, keeping the
  // other coordinates fixed at weighted total `rest`.
  static Real coordinate_for_share(Real t, Real rest, Real aj) {
    return t * rest / (aj * (Real(1) - t));
  }

  void normalize(std::vector<Real>& x) const {
    CompensatedSum<Real> s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < Real(kBoundarySnapTol)) x[i] = 0;
      s.add(a_[i] * x[i]);
    }
    const Real total = s.value();
    for (Real& v : x) v /= total;
  }

  // Signed ratio at x (already normalized); kRejected on degenerate points.
  Real evaluate(const std::vector<Real>& x) {
    ++evals_;
    Real lo = x[0], hi = x[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
      roots_[i] = std::sqrt(x[i]);
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
    if (lo == hi) return kRejected;
    const Real v =
        weighted_variance(std::span<const Real>(roots_), a_);
    if (v < Real(kDegenerateVarianceTol)) return kRejected;
    const Real r = gap_kernel(std::span<const Real>(x), a_, lo, hi) / v;
    return maximize_ ? r : -r;
  }

  Real probe(const std::vector<Real>& x, std::size_t j, Real share, Real rest) {
    trial_ = x;
    trial_[j] = coordinate_for_share(share, rest, a_[j]);
    normalize(trial_);
    return evaluate(trial_);
  }

  // Coarse grid over the weighted share of coordinate j (plus the current
  // share), then golden-section refinement bracketing the best candidate.
  // Returns (share, signed value).
  std::pair<Real, Real> line_search(const std::vector<Real>& x, std::size_t j,
                                    Real rest, Real f_current) {
    static constexpr Real kGrid[] = {Real(0),   Real(0.1), Real(0.2), Real(0.3),
                                     Real(0.4), Real(0.5), Real(0.6), Real(0.7),
                                     Real(0.8), Real(0.9), Real(0.97)};
    constexpr std::size_t kGridSize = sizeof(kGrid) / sizeof(kGrid[0]);

    Real cand[kGridSize + 1];
    Real value[kGridSize + 1];
    const Real current = std::clamp(a_[j] * x[j], Real(0), Real(0.97));
    std::size_t count = 0;
    for (std::size_t k = 0; k < kGridSize; ++k) {
      if (count > 0 && current > cand[count - 1] && current < kGrid[k]) {
        cand[count] = current;
        value[count] = f_current;
        ++count;
      }
      cand[count] = kGrid[k];
      value[count] = kGrid[k] == current ? f_current : probe(x, j, kGrid[k], rest);
      ++count;
    }

    std::size_t best_k = 0;
    for (std::size_t k = 1; k < count; ++k)
      if (value[k] > value[best_k]) best_k = k;
    Real best_share = cand[best_k];
    Real best_value = value[best_k];

    Real lo = best_k == 0 ? cand[0] : cand[best_k - 1];
    Real hi = best_k + 1 == count ? cand[count - 1] : cand[best_k + 1];
    const Real inv_phi = Real(0.6180339887498949);
    Real m1 = hi - inv_phi * (hi - lo);
    Real m2 = lo + inv_phi * (hi - lo);
    Real f1 = probe(x, j, m1, rest);
    Real f2 = probe(x, j, m2, rest);
    while (hi - lo > step_tol_) {
      if (f1 >= f2) {
        hi = m2;
        m2 = m1;
        f2 = f1;
        m1 = hi - inv_phi * (hi - lo);
        f1 = probe(x, j, m1, rest);
      } else {
        lo = m1;
        m1 = m2;
        f1 = f2;
        m2 = lo + inv_phi * (hi - lo);
        f2 = probe(x, j, m2, rest);
      }
      const Real side_value = std::max(f1, f2);
      if (side_value > best_value) {
        best_value = side_value;
        best_share = f1 >= f2 ? m1 : m2;
      }
    }
    return {best_share, best_value};
  }

  const WeightVector<Real>& a_;
  bool maximize_;
  Real step_tol_;
  int max_sweeps_;
  long evals_ = 0;
  std::vector<Real> roots_;
  std::vector<Real> trial_;
};

}  // namespace detail

/// Multi-start derivative-free search for the extremal gap/variance ratio
/// over {x >= 0 : sum a_i x_i = 1}. Deterministic for a fixed config: starts
/// are seeded Dirichlet draws, sweeps are ordered, and ties between starts
/// break toward the lowest start index.
template <std::floating_point Real>
SearchResult<Real> search_extremal(const SearchConfig<Real>& cfg) {
  if (cfg.n_starts < 1) throw DomainError("n_starts must be >= 1");
  if (cfg.max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(cfg.step_tolerance > Real(0)))
    throw DomainError("step_tolerance must be > 0");

  const auto& a = cfg.weights;
  const std::size_t n = a.size();
  const bool maximize = cfg.direction == RatioDirection::Maximize;

  detail::RatioSearch<Real> search(a, maximize, cfg.step_tolerance,
                                   cfg.max_iters);
  std::mt19937_64 rng(cfg.seed);

  std::vector<Real> best_x;
  Real best_signed = -std::numeric_limits<Real>::infinity();
  for (int s = 0; s < cfg.n_starts; ++s) {
    const std::vector<double> w = dirichlet_flat(rng, n);
    std::vector<Real> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<Real>(w[i]);
    const Real f = search.descend(x);
    if (f > best_signed) {
      best_signed = f;
      best_x = x;
    }
  }
  if (best_x.empty())
    throw InternalError("no search start produced a usable ratio");

  const Real best_ratio = maximize ? best_signed : -best_signed;
  const Real amin = a.min();
  const Real target = maximize ? Real(1) / amin : Real(1) / (Real(1) - amin);
  const Real cross_tol = Real(kSearchSoundnessRelTol) * target;
  if (maximize ? best_ratio > target + cross_tol
               : best_ratio < target - cross_tol)
    throw InternalError(
        "search produced a ratio outside the theoretical interval");

  SearchResult<Real> result{best_ratio, DataVector<Real>(std::move(best_x)),
                            target, std::abs(best_ratio - target) / target,
                            search.evaluations()};
  return result;
}

/// For X = (1+e, 1-e) with equal weights, returns (sigma(X), gap) pairs.
/// gap/sigma -> 0 as e -> 0: no c > 0 satisfies c sigma(X) <= gap.
template <std::floating_point Real>
std::vector<std::pair<Real, Real>> sigma_impossibility_curve(
    std::span<const Real> epsilons) {
  const auto half = WeightVector<Real>::uniform(2);
  std::vector<std::pair<Real, Real>> out;
  out.reserve(epsilons.size());
  for (const Real eps : epsilons) {
    if (!(eps > Real(0)) || !(eps < Real(1)))
      throw DomainError("epsilon must lie in (0, 1)");
    const DataVector<Real> x(std::vector<Real>{Real(1) + eps, Real(1) - eps});
    out.emplace_back(std_dev(x, half), amgm_gap(x, half));
  }
  return out;
}

}  // namespace amgm
