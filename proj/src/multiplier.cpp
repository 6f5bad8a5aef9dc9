#include "gendiff/multiplier.hpp"

#include "gendiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gendiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double singular_distance(const Params& p, double x) {
  return std::min(std::abs(x - p.alpha), std::abs(x - p.beta));
}

// (x-alpha)^{-2s}(x-beta)^{-2s}
double singular_weight(const Params& p, double x) {
  const double q = (x - p.alpha) * (x - p.beta);
  return 1.0 / std::pow(q * q, p.order);
}

void require_frequencies_on_grid(const Params& p, const GridSpec& g) {
  if (!g.contains_frequency(p.alpha) || !g.contains_frequency(p.beta))
    throw std::invalid_argument("alpha and beta must lie inside the grid frequency range");
}

std::array<double, 3> exclusion_radii(const Params& p) {
  return {p.eps0, 0.5 * p.eps0, 0.25 * p.eps0};
}

// dx * sum_j e^{-ix u_j} f_j at an arbitrary frequency.
cplx transform_at(const Signal& f, double x) {
  const GridSpec& g = f.grid();
  cplx acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) acc += std::polar(1.0, -x * g.sample_point(j)) * f[j];
  return acc * g.spacing();
}

double growth_exponent(const std::array<double, 3>& I) {
  const double d_outer = I[1] - I[0];
  const double d_inner = I[2] - I[1];
  if (I[2] <= 0.0 || d_inner <= 1e-14 * I[2]) return 0.0;
  if (d_outer <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, std::log2(d_inner / d_outer));
}

} // namespace

void Params::validate() const {
  if (order < 1) throw std::invalid_argument("order s must be at least 1");
  if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(q_tol >= 0.0) || q_tol >= kNonMemberExponent)
    throw std::invalid_argument("q_tol must lie in [0, 0.5)");
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw std::invalid_argument("alpha and beta must be finite");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non-member";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "member") return Verdict::member;
  if (s == "non-member") return Verdict::non_member;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

cplx symbol_T(const Params& p, double x) {
  const double sign = (p.order % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(x - p.alpha, p.order) * std::pow(x - p.beta, p.order);
}

Signal apply_T(const Params& p, const Signal& g) {
  Spectrum G = forward_transform(g);
  auto& c = G.mutable_coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol_T(p, G.frequency(i));
  return inverse_transform(G);
}

SolveResult solve_T(const Params& p, const Signal& h, bool force) {
  p.validate();
  Spectrum H = forward_transform(h);
  if (!force) {
    const MembershipReport rep = membership_test(p, H);
    if (rep.verdict != Verdict::member)
      throw MembershipRefused("right-hand side is not in the range of T (verdict " +
                              to_string(rep.verdict) + ")");
  }
  const double step = H.grid().frequency_step();
  double dropped = 0.0;
  auto& c = H.mutable_coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const cplx sym = symbol_T(p, H.frequency(i));
    if (std::abs(sym) < p.tau) {
      dropped += std::norm(c[i]);
      c[i] = 0.0;
    } else {
      c[i] /= sym;
    }
  }
  dropped *= step / kTwoPi;
  const double total = h.energy();
  SolveResult out{inverse_transform(H), dropped, dropped > 1e-12 * total};
  return out;
}

double membership_integrand(const Params& p, cplx F, double x) {
  return std::norm(F) * singular_weight(p, x);
}

double membership_integrand(const Params& p, const Spectrum& F, std::size_t node) {
  return membership_integrand(p, F[node], F.frequency(node));
}

MembershipReport membership_test(const Params& p, const Signal& f) {
  return membership_test(p, forward_transform(f));
}

// Trapezoid rule on the node lattice, augmented with the cut points
// alpha +/- r and beta +/- r for every radius r, so that each truncated
// integral is the exact integral of one nonnegative piecewise-linear
// interpolant over a nested family of domains. Values at cut points come
// from the transform sum of the samples, which interpolates the node values
// without smearing the high-order zeros at alpha and beta. Magnitudes are
// reduced by the roundoff floor of the transforms before weighting, so a
// high-order zero does not read as noise divided by a tiny denominator.
MembershipReport membership_test(const Params& p, const Spectrum& F) {
  p.validate();
  const GridSpec& g = F.grid();
  require_frequencies_on_grid(p, g);
  const double step = g.frequency_step();
  const auto radii = exclusion_radii(p);
  if (radii[2] < step)
    throw std::invalid_argument("eps0/4 is below the grid frequency resolution pi/L");
  if (p.eps0 >= 0.5 * step * 1e4)
    throw std::invalid_argument("eps0 must be smaller than 5000 frequency steps");

  struct Point {
    double x;
    std::optional<std::size_t> node;
  };
  std::vector<Point> pts;
  pts.reserve(g.size() + 12);
  for (std::size_t i = 0; i < g.size(); ++i) pts.push_back({g.frequency(i), i});
  for (double r : radii) {
    for (double c : {p.alpha - r, p.alpha + r, p.beta - r, p.beta + r})
      if (g.contains_frequency(c)) pts.push_back({c, std::nullopt});
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });

  const Signal samples = inverse_transform(F);
  double peak = 0.0;
  for (const cplx& z : F.coeffs()) peak = std::max(peak, std::abs(z));
  const double floor = 8.0 * std::sqrt(static_cast<double>(g.size())) *
                       std::numeric_limits<double>::epsilon() * peak;
  std::vector<double> value(pts.size(), std::numeric_limits<double>::quiet_NaN());
  auto value_at = [&](std::size_t k) {
    if (std::isnan(value[k])) {
      const Point& pt = pts[k];
      const cplx Fx = pt.node ? F[*pt.node] : transform_at(samples, pt.x);
      const double mag = std::abs(Fx);
      value[k] = mag > floor ? membership_integrand(p, Fx * ((mag - floor) / mag), pt.x) : 0.0;
    }
    return value[k];
  };

  MembershipReport rep;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k].x;
    const double b = pts[k + 1].x;
    if (!(b > a)) continue;
    const double dm = singular_distance(p, 0.5 * (a + b));
    if (dm <= radii[2]) continue;
    const double seg = 0.5 * (b - a) * (value_at(k) + value_at(k + 1));
    for (std::size_t l = 0; l < radii.size(); ++l)
      if (dm > radii[l]) rep.integrals[l] += seg;
  }

  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.frequency(i);
    const double d = singular_distance(p, x);
    if (d < radii[2]) rep.excluded_mass += std::norm(F[i]);
    if (d == 0.0) rep.on_node_mass += std::norm(F[i]);
  }
  rep.excluded_mass *= step / kTwoPi;
  rep.on_node_mass *= step / kTwoPi;

  rep.growth_exponent = growth_exponent(rep.integrals);
  if (rep.growth_exponent <= p.q_tol)
    rep.verdict = Verdict::member;
  else if (rep.growth_exponent >= kNonMemberExponent)
    rep.verdict = Verdict::non_member;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

namespace {

// Nodes exactly on alpha or beta carry no singular weight; a member's
// coefficient there vanishes in the continuum limit.
cplx weighted_sum(const Params& p, const Spectrum& F, const Spectrum& G) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double x = F.frequency(i);
    double w = 1.0;
    if (singular_distance(p, x) > 0.0) w += singular_weight(p, x);
    acc += w * F[i] * std::conj(G[i]);
  }
  return acc * F.grid().frequency_step();
}

} // namespace

cplx weighted_inner_product(const Params& p, const Signal& f, const Signal& g) {
  const Spectrum F = forward_transform(f);
  const Spectrum G = forward_transform(g);
  for (const Spectrum* s : {&F, &G}) {
    const MembershipReport rep = membership_test(p, *s);
    if (rep.verdict != Verdict::member)
      throw MembershipRefused("weighted inner product needs members (verdict " +
                              to_string(rep.verdict) + ")");
  }
  return weighted_sum(p, F, G);
}

cplx sobolev_inner_product(int order, const Signal& f, const Signal& g) {
  if (order < 1) throw std::invalid_argument("Sobolev order must be at least 1");
  const Spectrum F = forward_transform(f);
  const Spectrum G = forward_transform(g);
  if (!(F.grid() == G.grid())) throw std::invalid_argument("signals live on different grids");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double x = F.frequency(i);
    acc += (1.0 + std::pow(std::abs(x), 2 * order)) * F[i] * std::conj(G[i]);
  }
  return acc * F.grid().frequency_step();
}

double analytic_bound_K(const Params& p) {
  p.validate();
  const int s = p.order;
  auto ratio = [&](double x) {
    const double q = (x - p.alpha) * (x - p.beta);
    return (std::pow(q * q, s) + 1.0) / (1.0 + std::pow(x, 4 * s));
  };
  // The ratio tends to 1 at infinity; its interesting structure sits within
  // a few multiples of max(|alpha|, |beta|, 1) from the origin.
  const double reach = 20.0 * (1.0 + std::abs(p.alpha) + std::abs(p.beta));
  double lo = -reach, hi = reach;
  double best_x = 0.0, best = 1.0;
  for (int pass = 0; pass < 4; ++pass) {
    constexpr int n = 200000;
    const double dx = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double x = lo + i * dx;
      const double r = ratio(x);
      if (r > best) {
        best = r;
        best_x = x;
      }
    }
    lo = best_x - 2.0 * dx;
    hi = best_x + 2.0 * dx;
  }
  return best;
}

ProbeResult boundedness_probe(const Params& p, const GridSpec& grid, int trials,
                              unsigned long long seed) {
  if (trials < 1) throw std::invalid_argument("boundedness probe needs at least one trial");
  ProbeResult out;
  out.analytic_bound = analytic_bound_K(p);
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Signal g = random_smooth_signal(grid, seed + static_cast<unsigned long long>(t));
    const Signal Tg = apply_T(p, g);
    // Tg is in the range of T, so the membership gate is skipped here.
    const Spectrum F = forward_transform(Tg);
    const double num = weighted_sum(p, F, F).real();
    const double den = sobolev_inner_product(2 * p.order, g, g).real();
    out.max_ratio = std::max(out.max_ratio, num / den);
  }
  return out;
}

} // namespace gendiff
