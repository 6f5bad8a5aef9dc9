#include "gendiff/interval_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace gendiff::lemmas {

namespace {

constexpr double kPi = std::numbers::pi;

unsigned long long splitmix64(unsigned long long x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

ClosedIntervalPartition::ClosedIntervalPartition(std::vector<double> breakpoints)
    : breaks_(std::move(breakpoints)) {
  if (breaks_.size() < 2) throw std::invalid_argument("a partition needs at least one cell");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i + 1] > breaks_[i]))
      throw std::invalid_argument("partition cell " + std::to_string(i) + " has nonpositive length");
  }
}

ClosedIntervalPartition ClosedIntervalPartition::from_intervals(const std::vector<Interval>& cells) {
  if (cells.empty()) throw std::invalid_argument("a partition needs at least one cell");
  std::vector<double> b;
  b.reserve(cells.size() + 1);
  b.push_back(cells.front().lo);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0 && cells[i].lo != cells[i - 1].hi)
      throw std::invalid_argument("partition cells " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " are not contiguous");
    b.push_back(cells[i].hi);
  }
  return ClosedIntervalPartition(std::move(b));
}

std::vector<Interval> ClosedIntervalPartition::cells() const {
  std::vector<Interval> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(cell(i));
  return out;
}

std::size_t ClosedIntervalPartition::locate(double u) const {
  if (u < breaks_.front() || u > breaks_.back()) return size();
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
  if (it == breaks_.end()) return size() - 1;
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

std::vector<RefinedCell> refine_indexed(const ClosedIntervalPartition& P,
                                        const ClosedIntervalPartition& Q) {
  const Interval J = P.support();
  const Interval K = Q.support();
  if (!(std::min(J.hi, K.hi) > std::max(J.lo, K.lo)))
    throw std::invalid_argument("partitions do not overlap in a set of positive length");

  std::vector<RefinedCell> out;
  std::size_t j = 0, k = 0;
  while (j < P.size() && k < Q.size()) {
    const Interval R = P.cell(j);
    const Interval S = Q.cell(k);
    const double lo = std::max(R.lo, S.lo);
    const double hi = std::min(R.hi, S.hi);
    if (hi > lo) out.push_back({{lo, hi}, j, k});
    if (R.hi < S.hi) {
      ++j;
    } else if (S.hi < R.hi) {
      ++k;
    } else {
      ++j;
      ++k;
    }
  }
  return out;
}

ClosedIntervalPartition refine(const ClosedIntervalPartition& P, const ClosedIntervalPartition& Q) {
  const auto cells = refine_indexed(P, Q);
  std::vector<double> b;
  b.reserve(cells.size() + 1);
  b.push_back(cells.front().cell.lo);
  for (const auto& c : cells) b.push_back(c.cell.hi);
  return ClosedIntervalPartition(std::move(b));
}

bool refinement_bound_holds(const ClosedIntervalPartition& P, const ClosedIntervalPartition& Q) {
  return refine(P, Q).size() <= P.size() + Q.size() - 1;
}

double dist_to_integers(double x) { return std::abs(x - std::round(x)); }

bool sine_floor_check(double x) {
  return std::abs(std::sin(kPi * x)) >= 2.0 * dist_to_integers(x) - 1e-15;
}

std::pair<double, double> clip_pair(double a, double b, double c, double d) {
  if (!(c < d)) throw std::invalid_argument("clip_pair needs c < d");
  if (!(a <= d)) throw std::invalid_argument("clip_pair needs a <= d");
  if (!(b >= c)) throw std::invalid_argument("clip_pair needs b >= c");
  const double a_clipped = a < c ? c : a;
  const double b_clipped = b > d ? d : b;
  return {a_clipped, b_clipped};
}

double clip_pair_worst_slack(double a, double b, double c, double d, int points) {
  if (points < 2) throw std::invalid_argument("sweep needs at least two points");
  const auto [ac, bc] = clip_pair(a, b, c, d);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double u = (i == points - 1) ? d : c + (d - c) * i / (points - 1);
    const double slack = std::abs((u - a) * (u - b)) - std::abs((u - ac) * (u - bc));
    worst = std::min(worst, slack);
  }
  return worst;
}

double ZeroCells::a_zero(long k) const { return static_cast<double>(k) * kPi / alpha_gap; }
double ZeroCells::b_zero(long k) const { return static_cast<double>(k) * kPi / beta_gap; }
double ZeroCells::a_half_zero(long k) const {
  return (static_cast<double>(k) - 0.5) * kPi / alpha_gap;
}
double ZeroCells::b_half_zero(long k) const {
  return (static_cast<double>(k) - 0.5) * kPi / beta_gap;
}

namespace {

// Cells [h(k), h(k+1)] with h(k) = (k - 1/2) pi / gap that meet [-c, c] in
// positive length. Uses the same expression as the stored breakpoints.
std::pair<long, long> cell_index_range(double gap, double c) {
  auto h = [gap](long k) { return (static_cast<double>(k) - 0.5) * kPi / gap; };
  const double width = kPi / gap;
  long lo = static_cast<long>(std::floor(-c / width - 0.5)) + 1;
  long hi = static_cast<long>(std::ceil(c / width + 0.5)) - 1;
  while (h(lo) > -c) --lo;
  while (h(lo + 1) <= -c) ++lo;
  while (h(hi + 1) < c) ++hi;
  while (h(hi) >= c) --hi;
  return {lo, hi};
}

} // namespace

ZeroCells build_zero_cells(const Params& p, double x, double window) {
  if (x == p.alpha || x == p.beta)
    throw std::invalid_argument("zero cells are undefined at x = alpha or x = beta");
  if (!(window > 0.0)) throw std::invalid_argument("window half-length must be positive");

  const double ga = std::abs(x - p.alpha);
  const double gb = std::abs(x - p.beta);
  const auto [a_lo, a_hi] = cell_index_range(ga, window);
  const auto [b_lo, b_hi] = cell_index_range(gb, window);

  ZeroCells zc{x, window, ga, gb, a_lo, b_lo,
               ClosedIntervalPartition({-1.0, 1.0}), ClosedIntervalPartition({-1.0, 1.0}), {}};
  std::vector<double> ab, bb;
  for (long k = a_lo; k <= a_hi + 1; ++k) ab.push_back(zc.a_half_zero(k));
  for (long k = b_lo; k <= b_hi + 1; ++k) bb.push_back(zc.b_half_zero(k));
  zc.alpha_cells = ClosedIntervalPartition(std::move(ab));
  zc.beta_cells = ClosedIntervalPartition(std::move(bb));
  zc.refinement = refine_indexed(zc.alpha_cells, zc.beta_cells);
  return zc;
}

double sine_product_margin(const ZeroCells& zc, const Params& p, double u) {
  const auto it = std::find_if(zc.refinement.begin(), zc.refinement.end(),
                               [u](const RefinedCell& c) { return c.cell.contains(u); });
  if (it == zc.refinement.end()) throw std::out_of_range("u lies outside every refinement cell");
  const double aj = zc.a_zero(zc.first_a + static_cast<long>(it->left_index));
  const double bk = zc.b_zero(zc.first_b + static_cast<long>(it->right_index));
  const double lhs = std::abs(std::sin(u * (zc.x - p.alpha)) * std::sin(u * (zc.x - p.beta)));
  const double rhs = 4.0 / (kPi * kPi) * zc.alpha_gap * zc.beta_gap * std::abs(u - aj) *
                     std::abs(u - bk);
  return lhs - rhs;
}

bool sine_product_floor(const ZeroCells& zc, const Params& p, double u) {
  return sine_product_margin(zc, p, u) >= -1e-12;
}

namespace {

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

// Mixture proposal: 10% uniform on the box, 90% radial density
// |y - z|^{-4s} on the ball around the midpoints z_t = (c_t + d_t)/2 that
// circumscribes the box. With m > 4s the importance weights stay bounded
// near the worst singularity (c_t = d_t), so the variance is finite.
ChunkSums mc_chunk(int order, const std::vector<Interval>& cells, const std::vector<double>& cp,
                   const std::vector<double>& dp, const std::vector<double>& mid, double radius,
                   double ball_norm, double volume, std::size_t n, unsigned long long seed) {
  constexpr double kUniformShare = 0.1;
  const std::size_t m = cells.size();
  const int radial_power = static_cast<int>(m) - 4 * order;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(m), dir(m);
  ChunkSums acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (unif(rng) < kUniformShare) {
      for (std::size_t t = 0; t < m; ++t) u[t] = cells[t].lo + cells[t].length() * unif(rng);
    } else {
      double nrm = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        dir[t] = normal(rng);
        nrm += dir[t] * dir[t];
      }
      nrm = std::sqrt(nrm);
      const double r = radius * std::pow(unif(rng), 1.0 / radial_power);
      for (std::size_t t = 0; t < m; ++t) u[t] = mid[t] + r * dir[t] / nrm;
    }
    bool inside = true;
    double denom = 0.0, dist_sq = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      if (!cells[t].contains(u[t])) {
        inside = false;
        break;
      }
      const double q = (u[t] - cp[t]) * (u[t] - dp[t]);
      denom += std::pow(q * q, order);
      dist_sq += (u[t] - mid[t]) * (u[t] - mid[t]);
    }
    if (!inside || denom == 0.0) continue;
    const double density = kUniformShare / volume +
                           (1.0 - kUniformShare) * std::pow(dist_sq, -2.0 * order) / ball_norm;
    const double w = 1.0 / (denom * density);
    acc.sum += w;
    acc.sum_sq += w * w;
  }
  return acc;
}

} // namespace

McEstimate lemma3_mc_estimate(int order, const std::vector<Interval>& cells,
                              const std::vector<double>& c_points,
                              const std::vector<double>& d_points, std::size_t samples,
                              unsigned long long seed) {
  if (order < 1) throw std::invalid_argument("order s must be at least 1");
  const std::size_t m = cells.size();
  if (static_cast<long>(m) < 4L * order + 1)
    throw std::invalid_argument("the m-fold bound needs m >= 4s+1 (got m=" + std::to_string(m) +
                                ", s=" + std::to_string(order) + ")");
  if (c_points.size() != m || d_points.size() != m)
    throw std::invalid_argument("need one c_t and one d_t per cell");
  if (samples < 10000) throw std::invalid_argument("Monte Carlo needs at least 1e4 samples");

  std::vector<double> mid(m);
  double volume = 1.0, r2 = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const Interval& V = cells[t];
    if (!(V.length() > 0.0)) throw std::invalid_argument("cells must have positive length");
    if (!V.contains(c_points[t]) || !V.contains(d_points[t]))
      throw std::invalid_argument("c_t and d_t must lie in V_t");
    mid[t] = 0.5 * (c_points[t] + d_points[t]);
    volume *= V.length();
    const double far = std::max(mid[t] - V.lo, V.hi - mid[t]);
    r2 += far * far;
  }
  const double radius = std::sqrt(r2);
  const int radial_power = static_cast<int>(m) - 4 * order;
  const double md = static_cast<double>(m);
  const double sphere_area = 2.0 * std::pow(kPi, 0.5 * md) / std::tgamma(0.5 * md);
  const double ball_norm = sphere_area * std::pow(radius, radial_power) / radial_power;

  // Fixed-size chunks with their own derived seeds: the result does not
  // depend on how chunks are scheduled.
  constexpr std::size_t kChunk = 1u << 16;
  const std::size_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::future<ChunkSums>> jobs;
  jobs.reserve(n_chunks);
  for (std::size_t ch = 0; ch < n_chunks; ++ch) {
    const std::size_t n = std::min(kChunk, samples - ch * kChunk);
    const unsigned long long s = splitmix64(seed ^ splitmix64(ch + 1));
    jobs.push_back(std::async(std::launch::async, mc_chunk, order, std::cref(cells),
                              std::cref(c_points), std::cref(d_points), std::cref(mid), radius,
                              ball_norm, volume, n, s));
  }
  double sum = 0.0, sum_sq = 0.0;
  for (auto& j : jobs) {
    const ChunkSums cs = j.get();
    sum += cs.sum;
    sum_sq += cs.sum_sq;
  }
  const double n = static_cast<double>(samples);
  McEstimate est;
  est.samples = samples;
  est.value = sum / n;
  const double var = std::max(0.0, sum_sq / n - est.value * est.value);
  est.standard_error = std::sqrt(var / (n - 1.0));
  return est;
}

} // namespace gendiff::lemmas
