// Executable forms of the interval-partition combinatorics, the quadratic
// clipping inequality, the m-fold singular integral bound, and the zero/cell
// machinery behind the sine lower bounds.

#ifndef GENDIFF_INTERVAL_LEMMAS_HPP
#define GENDIFF_INTERVAL_LEMMAS_HPP

#include "gendiff/multiplier.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace gendiff::lemmas {

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  bool contains(double u) const { return u >= lo && u <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Contiguous closed intervals of positive length, stored as a strictly
/// increasing breakpoint list so neighbouring cells share endpoint values.
class ClosedIntervalPartition {
public:
  explicit ClosedIntervalPartition(std::vector<double> breakpoints);
  /// Throws unless each interval has positive length and r_i == l_{i+1}.
  static ClosedIntervalPartition from_intervals(const std::vector<Interval>& cells);

  std::size_t size() const { return breaks_.size() - 1; }
  Interval cell(std::size_t i) const { return {breaks_[i], breaks_[i + 1]}; }
  Interval support() const { return {breaks_.front(), breaks_.back()}; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::vector<Interval> cells() const;
  /// Index of a cell containing u, or size() if none.
  std::size_t locate(double u) const;

  bool operator==(const ClosedIntervalPartition&) const = default;

private:
  std::vector<double> breaks_;
};

/// A refinement cell R_j ∩ S_k together with its parent indices.
struct RefinedCell {
  Interval cell;
  std::size_t left_index;
  std::size_t right_index;
};

/// {R_j ∩ S_k : length > 0} in increasing order. Throws
/// std::invalid_argument when the supports overlap in less than positive
/// length.
std::vector<RefinedCell> refine_indexed(const ClosedIntervalPartition& P,
                                        const ClosedIntervalPartition& Q);
ClosedIntervalPartition refine(const ClosedIntervalPartition& P, const ClosedIntervalPartition& Q);

bool refinement_bound_holds(const ClosedIntervalPartition& P, const ClosedIntervalPartition& Q);

double dist_to_integers(double x);

/// |sin(pi x)| >= 2 d_Z(x) up to 1e-15.
bool sine_floor_check(double x);

/// Clipped pair (a', b') for c < d, a <= d, b >= c.
std::pair<double, double> clip_pair(double a, double b, double c, double d);

/// Smallest value of |(u-a)(u-b)| - |(u-a')(u-b')| over `points` equally
/// spaced u in [c, d] (endpoints included).
double clip_pair_worst_slack(double a, double b, double c, double d, int points);

/// Zeros a_k = k pi/|x-alpha|, b_k = k pi/|x-beta|, the cells A_k, B_k that
/// meet [-c, c] in positive length, and their refinement.
struct ZeroCells {
  double x;
  double window;
  double alpha_gap; ///< |x - alpha|
  double beta_gap;  ///< |x - beta|
  long first_a;     ///< index k of the first A-cell kept
  long first_b;     ///< index k of the first B-cell kept
  ClosedIntervalPartition alpha_cells;
  ClosedIntervalPartition beta_cells;
  std::vector<RefinedCell> refinement;

  double a_zero(long k) const;
  double b_zero(long k) const;
  /// Half-zeros a'_k = (k - 1/2) pi/|x-alpha| and b'_k likewise.
  double a_half_zero(long k) const;
  double b_half_zero(long k) const;
};

ZeroCells build_zero_cells(const Params& p, double x, double window);

/// Checks |sin(u(x-alpha)) sin(u(x-beta))| >= (4/pi^2)|(x-alpha)(x-beta)||u-a_j||u-b_k|
/// with slack 1e-12, where u lies in refinement cell A'_j ∩ B'_k. Throws
/// std::out_of_range when u is outside every cell.
bool sine_product_floor(const ZeroCells& zc, const Params& p, double u);

/// Right-hand minus left-hand side margin of the same inequality (>= 0 when it holds).
double sine_product_margin(const ZeroCells& zc, const Params& p, double u);

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  double relative_error() const { return value > 0.0 ? standard_error / value : 0.0; }
};

/// Importance-sampled Monte Carlo estimate of
///   \int_{prod V_t} du / sum_t (u_t - c_t)^{2s} (u_t - d_t)^{2s}
/// with c_t, d_t in V_t. Requires m >= 4s+1 and samples >= 1e4.
McEstimate lemma3_mc_estimate(int order, const std::vector<Interval>& cells,
                              const std::vector<double>& c_points,
                              const std::vector<double>& d_points, std::size_t samples,
                              unsigned long long seed = 1);

} // namespace gendiff::lemmas

#endif
