#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <amgm/bounds.hpp>
#include <amgm/random.hpp>
#include <amgm/sharpness.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"

using amgm::DataVector;
using amgm::RatioDirection;
using amgm::SearchConfig;
using amgm::WeightVector;
using amgm::WitnessSide;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// number of coordinate clusters when values within `tol` are merged
std::size_t distinct_values(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::size_t clusters = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] - v[i - 1] > tol) ++clusters;
  return clusters;
}

}  // namespace

TEST_CASE("equality witnesses", "[sharpness]") {
  const auto left = amgm::equality_witness<double>(3, WitnessSide::Left);
  CHECK(left.values()[0] == 1.0);
  CHECK(left.values()[1] == 0.0);
  CHECK(left.values()[2] == 0.0);

  const auto right = amgm::equality_witness<double>(3, WitnessSide::Right);
  CHECK(right.values()[0] == 1.0);
  CHECK(right.values()[1] == 1.0);
  CHECK(right.values()[2] == 0.0);

  CHECK_THROWS_AS(amgm::equality_witness<double>(1, WitnessSide::Left),
                  amgm::DomainError);

  SECTION("witnesses saturate the corresponding bound") {
    for (std::size_t n = 2; n <= 32; ++n) {
      const auto a = WeightVector<double>::uniform(n);
      const auto lo = amgm::theorem_bounds(
          amgm::equality_witness<double>(n, WitnessSide::Left), a);
      REQUIRE(lo.tight_lower);
      REQUIRE(lo.slack_lower <= 1e-12 * std::max(1.0, lo.gap));
      const auto hi = amgm::theorem_bounds(
          amgm::equality_witness<double>(n, WitnessSide::Right), a);
      REQUIRE(hi.tight_upper);
      REQUIRE(hi.slack_upper <= 1e-12 * std::max(1.0, hi.gap));
    }
  }
  SECTION("n = 2: both sides tight at once") {
    const auto a = WeightVector<double>::uniform(2);
    for (const auto side : {WitnessSide::Left, WitnessSide::Right}) {
      const auto r =
          amgm::theorem_bounds(amgm::equality_witness<double>(2, side), a);
      REQUIRE(r.tight_lower);
      REQUIRE(r.tight_upper);
    }
  }
}

TEST_CASE("gap variance ratio", "[sharpness]") {
  const auto u3 = WeightVector<double>::uniform(3);
  CHECK_THAT(amgm::gap_variance_ratio(
                 DataVector<double>(std::vector<double>{1, 0, 0}), u3),
             WithinRel(1.5, 1e-12));
  CHECK_THAT(amgm::gap_variance_ratio(
                 DataVector<double>(std::vector<double>{1, 1, 0}), u3),
             WithinRel(3.0, 1e-12));

  // n = 2 with equal weights: the ratio is identically 2
  std::mt19937_64 rng(1717);
  const auto half = WeightVector<double>::uniform(2);
  for (int k = 0; k < 200; ++k) {
    const double x = amgm::log_uniform(rng, 1e-3, 1e3);
    const double y = x * amgm::log_uniform(rng, 1.5, 1e3);
    CHECK_THAT(amgm::gap_variance_ratio(
                   DataVector<double>(std::vector<double>{x, y}), half),
               WithinRel(2.0, 1e-12));
  }

  CHECK_THROWS_AS(amgm::gap_variance_ratio(
                      DataVector<double>(std::vector<double>{2, 2, 2}), u3),
                  amgm::DegenerateInputError);
}

TEST_CASE("ratio lies in the theorem interval", "[sharpness]") {
  std::mt19937_64 rng(1818);
  double worst = 0;
  for (int k = 0; k < 100000; ++k) {
    const auto inst = testgen::random_instance(rng, 2, 64, 0.1);
    const DataVector<double> x(inst.data);
    if (x.min() == x.max()) continue;
    const WeightVector<double> a(inst.weights);
    const double r = amgm::gap_variance_ratio(x, a);
    worst = std::max(worst, testgen::excess(1.0 / (1.0 - a.min()), r));
    worst = std::max(worst, testgen::excess(r, 1.0 / a.min()));
  }
  INFO("worst interval violation " << worst);
  REQUIRE(worst <= 1e-9);
}

TEST_CASE("search converges to the sharp constants", "[sharpness]") {
  for (const std::size_t n : {3, 4, 5}) {
    SearchConfig<double> cfg{WeightVector<double>::uniform(n)};
    cfg.seed = 11;
    cfg.direction = RatioDirection::Maximize;
    const auto max_result = amgm::search_extremal(cfg);
    REQUIRE(max_result.relative_gap_to_target <= 0.01);
    REQUIRE(max_result.best_ratio <=
            max_result.target * (1 + amgm::kSearchSoundnessRelTol));

    cfg.direction = RatioDirection::Minimize;
    const auto min_result = amgm::search_extremal(cfg);
    REQUIRE(min_result.relative_gap_to_target <= 0.01);
    REQUIRE(min_result.best_ratio >=
            min_result.target * (1 - amgm::kSearchSoundnessRelTol));

    // argpoints take at most two distinct coordinate values
    const auto& p = max_result.argpoint;
    REQUIRE(distinct_values({p.values().begin(), p.values().end()}, 1e-6) <= 2);
    const auto& q = min_result.argpoint;
    REQUIRE(distinct_values({q.values().begin(), q.values().end()}, 1e-6) <= 2);

    // normalized onto the slice E_a(x) = 1
    const double mean = amgm::weighted_mean(p, cfg.weights);
    REQUIRE_THAT(mean, WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("search on unequal weights stays sound and reaches the witness ratio",
          "[sharpness]") {
  const WeightVector<double> w({0.2, 0.3, 0.5});
  // ratio at the projected right-witness pattern (zero on the a_min entry)
  const double witness_ratio = amgm::gap_variance_ratio(
      DataVector<double>(std::vector<double>{0, 1, 1}), w);

  SearchConfig<double> cfg{w};
  cfg.seed = 5;
  const auto r = amgm::search_extremal(cfg);
  REQUIRE(r.best_ratio <= 5.0 * (1 + 1e-6));
  REQUIRE(r.best_ratio >= witness_ratio * (1 - 1e-2));

  cfg.direction = RatioDirection::Minimize;
  const auto rmin = amgm::search_extremal(cfg);
  REQUIRE(rmin.best_ratio >= rmin.target * (1 - 1e-6));
}

TEST_CASE("search is deterministic for a fixed config", "[sharpness]") {
  SearchConfig<double> cfg{WeightVector<double>::uniform(4)};
  cfg.seed = 99;
  const auto r1 = amgm::search_extremal(cfg);
  const auto r2 = amgm::search_extremal(cfg);
  REQUIRE(r1.best_ratio == r2.best_ratio);
  REQUIRE(r1.target == r2.target);
  REQUIRE(r1.relative_gap_to_target == r2.relative_gap_to_target);
  REQUIRE(r1.n_evaluations == r2.n_evaluations);
  REQUIRE(std::equal(r1.argpoint.values().begin(), r1.argpoint.values().end(),
                     r2.argpoint.values().begin()));

  SearchConfig<double> other = cfg;
  other.seed = 100;
  const auto r3 = amgm::search_extremal(other);
  CHECK(r3.n_evaluations != r1.n_evaluations);  // different start set
}

TEST_CASE("search config validation", "[sharpness]") {
  SearchConfig<double> cfg{WeightVector<double>::uniform(3)};
  cfg.n_starts = 0;
  CHECK_THROWS_AS(amgm::search_extremal(cfg), amgm::DomainError);
  cfg.n_starts = 1;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(amgm::search_extremal(cfg), amgm::DomainError);
  cfg.max_iters = 10;
  cfg.step_tolerance = 0.0;
  CHECK_THROWS_AS(amgm::search_extremal(cfg), amgm::DomainError);
}

TEST_CASE("sigma impossibility curve", "[sharpness]") {
  const std::vector<double> eps{0.1, 0.01, 0.001};
  const auto curve = amgm::sigma_impossibility_curve(std::span<const double>(eps));
  REQUIRE(curve.size() == 3);
  CHECK_THAT(curve[0].first, WithinRel(0.1, 1e-13));
  CHECK_THAT(curve[0].second, WithinRel(0.0050125628933800483, 1e-12));

  // gap/sigma decreases toward zero
  double prev = 1.0;
  for (const auto& [sigma, gap] : curve) {
    const double ratio = gap / sigma;
    REQUIRE(ratio < prev);
    prev = ratio;
  }

  // gap/eps^2 -> 1/2 (Taylor: 1 - sqrt(1 - e^2) = e^2/2 + O(e^4))
  const std::vector<double> tiny{1e-5};
  const auto t = amgm::sigma_impossibility_curve(std::span<const double>(tiny));
  CHECK_THAT(t[0].second / 1e-10, WithinAbs(0.5, 1e-3));

  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(amgm::sigma_impossibility_curve(std::span<const double>(bad)),
                  amgm::DomainError);
  const std::vector<double> bad2{1.0};
  CHECK_THROWS_AS(amgm::sigma_impossibility_curve(std::span<const double>(bad2)),
                  amgm::DomainError);
}

TEST_CASE("witness ratios match the oracle targets", "[sharpness][oracle]") {
  for (std::size_t n = 2; n <= 16; ++n) {
    const auto a = WeightVector<double>::uniform(n);
    const std::vector<double> w(a.values().begin(), a.values().end());

    std::vector<double> left(n, 0.0);
    left[0] = 1.0;
    const double got_left =
        amgm::gap_variance_ratio(DataVector<double>(left), a);
    const double want_left =
        static_cast<double>(oracle::gap_variance_ratio(left, w));
    REQUIRE(testgen::close(got_left, want_left, 1e-13));
    REQUIRE_THAT(got_left,
                 WithinRel(static_cast<double>(n) / (n - 1), 1e-12));

    std::vector<double> right(n, 1.0);
    right[n - 1] = 0.0;
    const double got_right =
        amgm::gap_variance_ratio(DataVector<double>(right), a);
    REQUIRE_THAT(got_right, WithinRel(static_cast<double>(n), 1e-12));
  }
}
