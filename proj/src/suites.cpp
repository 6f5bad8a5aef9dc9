#include "gendiff/suites.hpp"

#include "gendiff/circle.hpp"
#include "gendiff/errors.hpp"
#include "gendiff/interval_lemmas.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace gendiff::suites {

namespace lm = gendiff::lemmas;
using nlohmann::json;

namespace {

unsigned long long mix(unsigned long long x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

lm::ClosedIntervalPartition random_partition(std::mt19937_64& rng, int cells) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::set<double> inner;
  while (static_cast<int>(inner.size()) < cells - 1) {
    const double b = unif(rng);
    if (b > 0.0) inner.insert(b);
  }
  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), inner.begin(), inner.end());
  breaks.push_back(1.0);
  return lm::ClosedIntervalPartition(std::move(breaks));
}

// All strictly increasing subsets of {1, ..., k} with at most `max_inner`
// elements, as breakpoint lists on [0, k+1].
std::vector<std::vector<double>> lattice_breakpoints(int k, int max_inner) {
  std::vector<std::vector<double>> out;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    if (std::popcount(mask) > max_inner) continue;
    std::vector<double> b{0.0};
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) b.push_back(i + 1.0);
    b.push_back(k + 1.0);
    out.push_back(std::move(b));
  }
  return out;
}

} // namespace

json SuiteReport::to_json() const {
  return {{"name", name},
          {"pass", pass},
          {"checks", checks},
          {"violations", violations},
          {"worst_slack", finite_or_null(worst_slack)},
          {"details", details}};
}

SuiteReport refinement_suite(int trials, int max_size, int exhaustive_size, unsigned long long seed) {
  SuiteReport rep{"partition_refinement"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(1, std::max(1, max_size));
  std::size_t equalities = 0;
  auto check = [&](const lm::ClosedIntervalPartition& P, const lm::ClosedIntervalPartition& Q) {
    const long bound = static_cast<long>(P.size() + Q.size()) - 1;
    const long count = static_cast<long>(lm::refine(P, Q).size());
    ++rep.checks;
    rep.worst_slack = std::min(rep.worst_slack, static_cast<double>(bound - count));
    if (count > bound) ++rep.violations;
    if (count == bound) ++equalities;
  };
  for (int t = 0; t < trials; ++t) check(random_partition(rng, size_dist(rng)), random_partition(rng, size_dist(rng)));
  const std::size_t random_equalities = equalities;

  std::size_t exhaustive = 0;
  if (exhaustive_size >= 1) {
    // Two partitions with up to n-1 inner breakpoints each use at most
    // 2(n-1) distinct lattice points, which covers every interleaving.
    const auto patterns = lattice_breakpoints(2 * (exhaustive_size - 1), exhaustive_size - 1);
    for (const auto& p : patterns)
      for (const auto& q : patterns) {
        check(lm::ClosedIntervalPartition(p), lm::ClosedIntervalPartition(q));
        ++exhaustive;
      }
  }
  rep.details = {{"random_pairs", trials},
                 {"max_size", max_size},
                 {"random_equality_instances", random_equalities},
                 {"exhaustive_pairs", exhaustive},
                 {"equality_instances", equalities}};
  rep.pass = rep.violations == 0 && equalities > 0;
  return rep;
}

SuiteReport clipping_suite(int tuples, int sweep_points, unsigned long long seed) {
  SuiteReport rep{"quadratic_clipping"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::uniform_real_distribution<double> len(0.01, 4.0);
  for (int t = 0; t < tuples; ++t) {
    const double c = unif(rng);
    const double d = c + len(rng);
    // a <= d and b >= c, each landing left of, inside, or right of [c, d].
    const double a = d - 8.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double b = c + 8.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double slack = lm::clip_pair_worst_slack(a, b, c, d, sweep_points);
    ++rep.checks;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-12) ++rep.violations;
  }
  rep.details = {{"tuples", tuples}, {"sweep_points", sweep_points}, {"slack_tolerance", 1e-12}};
  rep.pass = rep.violations == 0;
  return rep;
}

SuiteReport integral_bound_suite(std::size_t samples, unsigned long long seed) {
  SuiteReport rep{"singular_integral_bound"};
  const std::size_t used = std::max<std::size_t>(samples, 10000);
  const std::pair<int, int> cases[] = {{1, 5}, {1, 6}, {2, 9}};
  json rows = json::array();
  bool any_wide = samples < 10000;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& [s, m] : cases) {
    std::vector<lm::Interval> unit(m, {0.0, 1.0}), doubled(m, {0.0, 2.0});
    std::vector<double> c(m), c2(m);
    for (int t = 0; t < m; ++t) {
      c[t] = unif(rng);
      c2[t] = 2.0 * c[t];
    }
    const unsigned long long case_seed = mix(seed ^ mix(static_cast<unsigned long long>(100 * s + m)));
    const auto small = lm::lemma3_mc_estimate(s, unit, c, c, used, case_seed);
    const auto large = lm::lemma3_mc_estimate(s, doubled, c2, c2, used, case_seed);
    const double exponent = std::log2(large.value / small.value);
    const bool finite = std::isfinite(small.value) && std::isfinite(large.value) && small.value > 0.0;
    const double deviation = std::abs(exponent - (m - 4 * s));
    const bool wide = samples < 10000 || small.relative_error() >= 0.05;
    any_wide = any_wide || wide;
    ++rep.checks;
    const bool ok = finite && deviation <= 0.2;
    if (!ok) ++rep.violations;
    rep.worst_slack = std::min(rep.worst_slack, 0.2 - deviation);
    rows.push_back({{"s", s},
                    {"m", m},
                    {"estimate", small.value},
                    {"standard_error", small.standard_error},
                    {"relative_error", small.relative_error()},
                    {"doubled_estimate", large.value},
                    {"scaling_exponent", finite_or_null(exponent)},
                    {"expected_exponent", m - 4 * s},
                    {"wide_standard_error", wide}});
  }
  rep.details = {{"requested_samples", samples},
                 {"samples", used},
                 {"wide_standard_error", any_wide},
                 {"cases", rows}};
  rep.pass = rep.violations == 0;
  return rep;
}

SuiteReport sine_floor_suite(std::size_t points, unsigned long long seed) {
  SuiteReport rep{"sine_floor"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = unif(rng);
    ++rep.checks;
    rep.worst_slack =
        std::min(rep.worst_slack, std::abs(std::sin(std::numbers::pi * x)) - 2.0 * lm::dist_to_integers(x));
    if (!lm::sine_floor_check(x)) ++rep.violations;
  }
  rep.details = {{"points", points}, {"range", {-10.0, 10.0}}};
  rep.pass = rep.violations == 0;
  return rep;
}

SuiteReport sine_product_suite(std::size_t pairs, unsigned long long seed) {
  SuiteReport rep{"sine_product_floor"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-3.0, 3.0), freq(-10.0, 10.0), window(0.5, 3.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < pairs; ++i) {
    Params p;
    p.alpha = shift(rng);
    p.beta = shift(rng);
    double x = freq(rng);
    while (std::abs(x - p.alpha) < 1e-3 || std::abs(x - p.beta) < 1e-3) x = freq(rng);
    const double c = window(rng);
    const auto zc = lm::build_zero_cells(p, x, c);
    const double u = -c + 2.0 * c * unif(rng);
    ++rep.checks;
    rep.worst_slack = std::min(rep.worst_slack, lm::sine_product_margin(zc, p, u));
    if (!lm::sine_product_floor(zc, p, u)) ++rep.violations;
  }
  rep.details = {{"pairs", pairs}, {"slack_tolerance", 1e-12}};
  rep.pass = rep.violations == 0;
  return rep;
}

json circle_sweep(long max_n, int max_s, unsigned long long seed) {
  namespace cm = gendiff::circle;
  json rows = json::array();
  bool all_ok = true;
  double worst = 0.0;
  std::size_t cases = 0;
  for (long n = 2; n <= max_n; ++n) {
    for (int s = 1; s <= max_s; ++s) {
      for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
          std::mt19937_64 rng(mix(seed ^ mix((static_cast<unsigned long long>(n) << 40) ^
                                             (static_cast<unsigned long long>(s) << 32) ^
                                             (static_cast<unsigned long long>(a) << 16) ^
                                             static_cast<unsigned long long>(b))));
          std::normal_distribution<double> gauss;
          auto random_vec = [&] {
            std::vector<cplx> v(n);
            for (auto& z : v) z = {gauss(rng), gauss(rng)};
            return v;
          };
          std::vector<cplx> dft = random_vec();
          dft[a] = 0.0;
          dft[b] = 0.0;
          const auto f = cm::CircleSignal::from_dft(std::move(dft));

          json feasible = json::array(), infeasible = json::array();
          double row_worst = 0.0;
          bool necessity = true, refusal = true;
          for (long u = 0; u < n; ++u) {
            const auto g = cm::CircleSignal(random_vec());
            if (!cm::circle_characterize(cm::apply_circle_difference(g, s, a, b, u), a, b, s))
              necessity = false;
            if (cm::common_symbol_zeros(n, s, a, b, {u}).empty()) {
              const auto dec = cm::circle_decompose(f, a, b, s, {u});
              row_worst = std::max(row_worst, dec.relative_residual);
              feasible.push_back(u);
            } else {
              infeasible.push_back(u);
              try {
                (void)cm::circle_decompose(f, a, b, s, {u});
                refusal = false;
              } catch (const InfeasibleShifts&) {
              }
            }
          }
          const bool ok = necessity && refusal && row_worst <= 1e-12;
          all_ok = all_ok && ok;
          worst = std::max(worst, row_worst);
          ++cases;
          rows.push_back({{"N", n},
                          {"s", s},
                          {"alpha", a},
                          {"beta", b},
                          {"feasible_shifts", feasible},
                          {"infeasible_shifts", infeasible},
                          {"max_relative_residual", row_worst},
                          {"necessity_holds", necessity},
                          {"infeasible_refused", refusal},
                          {"pass", ok}});
        }
      }
    }
  }
  return {{"max_n", max_n},
          {"max_s", max_s},
          {"cases", cases},
          {"max_relative_residual", worst},
          {"pass", all_ok},
          {"rows", rows}};
}

} // namespace gendiff::suites
