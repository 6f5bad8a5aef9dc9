// Randomised property suites over the interval lemmas and the exhaustive
// sweep of the cyclic-group model, as run by the lemma-check and
// circle-sweep subcommands.

#ifndef GENDIFF_SUITES_HPP
#define GENDIFF_SUITES_HPP

#include <json.hpp>

#include <cstddef>
#include <limits>
#include <string>

namespace gendiff::suites {

struct SuiteReport {
  std::string name;
  bool pass = true;
  std::size_t checks = 0;
  std::size_t violations = 0;
  /// Smallest observed margin of the inequality under test.
  double worst_slack = std::numeric_limits<double>::infinity();
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Random pairs of contiguous partitions of [0,1] with up to max_size cells,
/// plus every breakpoint pattern with at most `exhaustive_size` cells.
SuiteReport refinement_suite(int trials, int max_size, int exhaustive_size,
                             unsigned long long seed);

/// Random admissible (a, b, c, d) with `sweep_points`-point u-sweeps.
SuiteReport clipping_suite(int tuples, int sweep_points, unsigned long long seed);

/// Monte Carlo bound for (s, m) in {(1,5), (1,6), (2,9)} on unit cells and
/// the doubled cells with common random numbers. Requests below 1e4 samples
/// are raised to 1e4 and flagged.
SuiteReport integral_bound_suite(std::size_t samples, unsigned long long seed);

/// |sin(pi x)| >= 2 d_Z(x) on uniform points of [-10, 10].
SuiteReport sine_floor_suite(std::size_t points, unsigned long long seed);

/// The sine-product floor on random (alpha, beta, x, c, u).
SuiteReport sine_product_suite(std::size_t pairs, unsigned long long seed);

/// One row per (N, s, alpha, beta) for 2 <= N <= max_n and 1 <= s <= max_s:
/// which single shifts are feasible, the worst decomposition residual over
/// feasible shifts, and whether every difference output satisfied the
/// character conditions.
nlohmann::json circle_sweep(long max_n, int max_s, unsigned long long seed);

} // namespace gendiff::suites

#endif
