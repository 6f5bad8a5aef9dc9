#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gendiff/interval_lemmas.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace gendiff;
using namespace gendiff::lemmas;
using oracle::pi;

namespace {

Params make_params(double alpha, double beta) {
  Params p;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

ClosedIntervalPartition random_partition(std::mt19937_64& rng, double lo, double hi, int cells) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::set<double> inner;
  while (static_cast<int>(inner.size()) < cells - 1) inner.insert(d(rng));
  std::vector<double> b{lo};
  b.insert(b.end(), inner.begin(), inner.end());
  b.push_back(hi);
  return ClosedIntervalPartition(b);
}

} // namespace

TEST_CASE("distance to the integers") {
  CHECK(dist_to_integers(0.25) == 0.25);
  CHECK(dist_to_integers(3.9) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dist_to_integers(-0.5) == 0.5);
  CHECK(dist_to_integers(-7.0) == 0.0);
}

TEST_CASE("sine floor") {
  CHECK(sine_floor_check(0.5));
  CHECK(sine_floor_check(0.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  int failures = 0;
  for (int i = 0; i < 100000; ++i) failures += !sine_floor_check(d(rng));
  CHECK(failures == 0);
}

TEST_CASE("closed-interval partitions") {
  SUBCASE("construction") {
    const ClosedIntervalPartition P({0.0, 1.0, 2.0});
    CHECK(P.size() == 2);
    CHECK(P.cell(1) == Interval{1.0, 2.0});
    CHECK(P.support() == Interval{0.0, 2.0});
    CHECK(P.locate(1.5) == 1);
    CHECK(P.locate(3.0) == 2);
    CHECK(ClosedIntervalPartition::from_intervals({{0.0, 1.0}, {1.0, 2.0}}) == P);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(ClosedIntervalPartition({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ClosedIntervalPartition({0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ClosedIntervalPartition({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ClosedIntervalPartition::from_intervals({{0.0, 1.0}, {1.5, 2.0}}), std::invalid_argument);
  }
}

TEST_CASE("refinement examples") {
  const ClosedIntervalPartition P({0.0, 1.0, 2.0});
  const ClosedIntervalPartition Q({0.0, 0.5, 2.0});
  SUBCASE("hand refinement") {
    const auto R = refine(P, Q);
    CHECK(R.breakpoints() == std::vector<double>{0.0, 0.5, 1.0, 2.0});
    CHECK(refinement_bound_holds(P, Q));
    CHECK(R.size() == P.size() + Q.size() - 1);
  }
  SUBCASE("single interval against s cells") {
    std::mt19937_64 rng(2);
    for (int s = 1; s <= 10; ++s) {
      const auto S = random_partition(rng, 0.0, 2.0, s);
      CHECK(refine(ClosedIntervalPartition({0.0, 2.0}), S).size() == static_cast<std::size_t>(s));
    }
  }
  SUBCASE("P = Q") { CHECK(refine(P, P) == P); }
  SUBCASE("parent indices") {
    const auto cells = refine_indexed(P, Q);
    REQUIRE(cells.size() == 3);
    CHECK(cells[1].cell == Interval{0.5, 1.0});
    CHECK(cells[1].left_index == 0);
    CHECK(cells[1].right_index == 1);
  }
  SUBCASE("supports overlapping in a point") {
    CHECK_THROWS_AS(refine(ClosedIntervalPartition({0.0, 1.0}), ClosedIntervalPartition({1.0, 2.0})),
                    std::invalid_argument);
  }
}

TEST_CASE("refinement bound and count oracle on random partitions") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 50);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  for (int t = 0; t < 500; ++t) {
    const auto P = random_partition(rng, 0.0, 1.0, size(rng));
    const double lo = shift(rng);
    const auto Q = random_partition(rng, lo, lo + 1.0, size(rng));
    const auto R = refine(P, Q);
    CHECK(refinement_bound_holds(P, Q));
    CHECK(R.size() <= P.size() + Q.size() - 1);
    CHECK(R.size() == oracle::brute_refinement_count(P.breakpoints(), Q.breakpoints()));
  }
}

TEST_CASE("refinement is associative") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(1, 12);
  for (int t = 0; t < 200; ++t) {
    const auto A = random_partition(rng, 0.0, 1.0, size(rng));
    const auto B = random_partition(rng, 0.0, 1.0, size(rng));
    const auto C = random_partition(rng, 0.0, 1.0, size(rng));
    CHECK(refine(refine(A, B), C) == refine(A, refine(B, C)));
  }
}

TEST_CASE("quadratic clipping") {
  SUBCASE("hand example") {
    const auto [a1, b1] = clip_pair(-1.0, 3.0, 0.0, 1.0);
    CHECK(a1 == 0.0);
    CHECK(b1 == 1.0);
    const double u = 0.5;
    CHECK(std::abs((u + 1.0) * (u - 3.0)) == doctest::Approx(3.75));
    CHECK(std::abs((u - a1) * (u - b1)) == doctest::Approx(0.25));
  }
  SUBCASE("points inside the interval are unchanged") {
    const auto [a1, b1] = clip_pair(0.2, 0.7, 0.0, 1.0);
    CHECK(a1 == 0.2);
    CHECK(b1 == 0.7);
  }
  SUBCASE("random admissible tuples") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    double worst = 0.0;
    for (int t = 0; t < 5000; ++t) {
      double c = d(rng), dd = d(rng);
      if (c > dd) std::swap(c, dd);
      if (c == dd) continue;
      const double a = std::min(d(rng), dd), b = std::max(d(rng), c);
      const auto [a1, b1] = clip_pair(a, b, c, dd);
      CHECK(a1 >= c);
      CHECK(a1 <= dd);
      CHECK(b1 >= c);
      CHECK(b1 <= dd);
      worst = std::min(worst, clip_pair_worst_slack(a, b, c, dd, 100));
    }
    CHECK(worst >= -1e-12);
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(clip_pair(0.0, 0.5, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(clip_pair(2.0, 0.5, 0.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("zero cells") {
  SUBCASE("one alpha cell when |x - alpha| is small") {
    const double c = 2.0, delta = 0.4;
    const auto p = make_params(0.0, 5.0);
    for (double gap : {0.01, 0.3, pi * delta / c}) {
      const auto zc = build_zero_cells(p, gap, c);
      CHECK(zc.alpha_cells.size() == 1);
    }
  }
  SUBCASE("cell count bound for larger gaps") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> xd(-20.0, 20.0), cd(0.5, 3.0), dd(0.05, 0.49);
    const auto p = make_params(0.7, -1.2);
    for (int t = 0; t < 2000; ++t) {
      const double x = xd(rng), c = cd(rng), delta = dd(rng);
      const double gap = std::abs(x - p.alpha);
      if (gap <= pi * delta / c) continue;
      const auto zc = build_zero_cells(p, x, c);
      CHECK(static_cast<double>(zc.alpha_cells.size()) < 2 * c / pi * (1 + 1 / delta) * gap);
    }
  }
  SUBCASE("cells are centered on the zeros and have length pi/gap") {
    const auto p = make_params(0.3, 2.7);
    const auto zc = build_zero_cells(p, 7.9, 1.5);
    for (std::size_t i = 0; i < zc.alpha_cells.size(); ++i) {
      const auto A = zc.alpha_cells.cell(i);
      const long k = zc.first_a + static_cast<long>(i);
      CHECK(0.5 * (A.lo + A.hi) == doctest::Approx(zc.a_zero(k)).epsilon(1e-14));
      CHECK(A.length() == doctest::Approx(pi / zc.alpha_gap).epsilon(1e-13));
    }
    for (std::size_t i = 0; i < zc.beta_cells.size(); ++i) {
      const auto B = zc.beta_cells.cell(i);
      CHECK(0.5 * (B.lo + B.hi) == doctest::Approx(zc.b_zero(zc.first_b + static_cast<long>(i))).epsilon(1e-14));
    }
  }
  SUBCASE("the refinement covers the window") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xd(-15.0, 15.0), ud(-1.0, 1.0);
    const auto p = make_params(-0.4, 1.1);
    for (int t = 0; t < 100; ++t) {
      const double c = 1.0 + t % 3;
      const auto zc = build_zero_cells(p, xd(rng), c);
      for (int k = 0; k < 50; ++k) {
        const double u = c * ud(rng);
        const bool covered = std::any_of(zc.refinement.begin(), zc.refinement.end(),
                                         [u](const RefinedCell& r) { return r.cell.contains(u); });
        CHECK(covered);
      }
    }
  }
  SUBCASE("undefined at alpha") { CHECK_THROWS_AS(build_zero_cells(make_params(1.0, 2.0), 1.0, 1.0), std::invalid_argument); }
}

TEST_CASE("sine product floor") {
  const auto p = make_params(0.3, -1.7);
  SUBCASE("at a zero both sides vanish") {
    const auto zc = build_zero_cells(p, 4.2, 2.0);
    const double u = zc.a_zero(zc.first_a + 1);
    CHECK(sine_product_floor(zc, p, u));
  }
  SUBCASE("cell midpoints and random points") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> xd(-12.0, 12.0), ud(-1.0, 1.0);
    for (int t = 0; t < 300; ++t) {
      const double x = xd(rng);
      const auto zc = build_zero_cells(p, x, 2.0);
      for (const auto& r : zc.refinement) CHECK(sine_product_floor(zc, p, 0.5 * (r.cell.lo + r.cell.hi)));
      for (int k = 0; k < 30; ++k) CHECK(sine_product_floor(zc, p, 2.0 * ud(rng)));
    }
  }
  SUBCASE("outside every cell") {
    const auto zc = build_zero_cells(p, 4.2, 1.0);
    CHECK_THROWS_AS(sine_product_floor(zc, p, 1e6), std::out_of_range);
  }
}

TEST_CASE("singular integral Monte Carlo") {
  SUBCASE("s = 1, m = 5 on unit cells is finite") {
    const std::vector<Interval> cells(5, Interval{0.0, 1.0});
    const std::vector<double> mid(5, 0.5);
    const auto e = lemma3_mc_estimate(1, cells, mid, mid, 200000, 1);
    CHECK(std::isfinite(e.value));
    CHECK(e.value > 0.0);
    CHECK(e.samples == 200000);
    CHECK(e.relative_error() < 0.05);
  }
  SUBCASE("agrees with plain uniform sampling where its variance is finite") {
    // s = 1, m = 9: the integrand's square is integrable, so uniform sampling
    // is an unbiased finite-variance oracle.
    const int m = 9;
    const std::vector<Interval> cells(m, Interval{0.0, 1.0});
    std::vector<double> c(m), d(m);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < m; ++t) c[t] = unif(rng), d[t] = unif(rng);
    const auto e = lemma3_mc_estimate(1, cells, c, d, 400000, 2);

    const int n = 2000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double denom = 0.0;
      for (int t = 0; t < m; ++t) {
        const double u = unif(rng);
        denom += std::pow((u - c[t]) * (u - d[t]), 2);
      }
      sum += 1.0 / denom;
      sum2 += 1.0 / (denom * denom);
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(e.value - mean) <= 5.0 * std::hypot(se, e.standard_error));
  }
  SUBCASE("doubling the cells scales by 2^(m-4s)") {
    for (const auto& [s, m] : {std::pair{1, 5}, {1, 6}, {2, 9}}) {
      const std::vector<Interval> unit(m, Interval{0.0, 1.0}), twice(m, Interval{0.0, 2.0});
      const std::vector<double> c1(m, 0.5), c2(m, 1.0);
      const auto e1 = lemma3_mc_estimate(s, unit, c1, c1, 400000, 11);
      const auto e2 = lemma3_mc_estimate(s, twice, c2, c2, 400000, 11);
      CHECK(std::abs(std::log2(e2.value / e1.value) - (m - 4 * s)) <= 0.2);
    }
  }
  SUBCASE("deterministic in the seed") {
    const std::vector<Interval> cells(5, Interval{-1.0, 1.0});
    const std::vector<double> z(5, 0.0);
    CHECK(lemma3_mc_estimate(1, cells, z, z, 10000, 4).value == lemma3_mc_estimate(1, cells, z, z, 10000, 4).value);
  }
  SUBCASE("preconditions") {
    const std::vector<Interval> four(4, Interval{0.0, 1.0});
    const std::vector<double> h4(4, 0.5);
    CHECK_THROWS_AS(lemma3_mc_estimate(1, four, h4, h4, 10000), std::invalid_argument);
    const std::vector<Interval> five(5, Interval{0.0, 1.0});
    const std::vector<double> h5(5, 0.5), out(5, 2.0);
    CHECK_THROWS_AS(lemma3_mc_estimate(1, five, h5, h5, 9999), std::invalid_argument);
    CHECK_THROWS_AS(lemma3_mc_estimate(1, five, out, h5, 10000), std::invalid_argument);
  }
}
