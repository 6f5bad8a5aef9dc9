#include "gendiff/difference.hpp"

#include "gendiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gendiff {

namespace {

// Decorrelates per-draw seeds derived from one user seed.
unsigned long long splitmix64(unsigned long long x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> symbol_on_nodes(const DifferenceMeasure& dm, const GridSpec& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = difference_symbol(dm, g.frequency(i));
  return out;
}

} // namespace

DifferenceMeasure::DifferenceMeasure(double shift, const Params& params)
    : shift_(shift), params_(params) {
  if (!std::isfinite(shift)) throw std::invalid_argument("shift must be finite");
  if (params.order < 1) throw std::invalid_argument("order s must be at least 1");
}

std::array<Atom, 3> DifferenceMeasure::atoms() const {
  const double u = shift_;
  const double half_sum = 0.5 * (params_.alpha + params_.beta);
  const double half_diff = 0.5 * (params_.alpha - params_.beta);
  return {Atom{0.0, cplx(std::cos(u * half_diff), 0.0)},
          Atom{u, -0.5 * std::polar(1.0, u * half_sum)},
          Atom{-u, -0.5 * std::polar(1.0, -u * half_sum)}};
}

// cos(u(a-b)/2) - cos(u(x-(a+b)/2)) rewritten as a sine product so that the
// zeros at alpha and beta are exact in floating point.
double DifferenceMeasure::lambda_hat(double x) const {
  return 2.0 * std::sin(0.5 * shift_ * (x - params_.alpha)) *
         std::sin(0.5 * shift_ * (x - params_.beta));
}

double difference_symbol(const DifferenceMeasure& dm, double x) {
  return std::pow(2.0 * dm.lambda_hat(x), dm.params().order);
}

Signal apply_difference(const DifferenceMeasure& dm, const Signal& g) {
  Spectrum G = forward_transform(g);
  auto& c = G.mutable_coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= difference_symbol(dm, G.frequency(i));
  return inverse_transform(G);
}

Signal apply_difference_time_domain(const DifferenceMeasure& dm, const Signal& g) {
  const GridSpec& grid = g.grid();
  const double steps = dm.shift() / grid.spacing();
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9)
    throw std::invalid_argument("time-domain application needs a grid-aligned shift");
  const long n = static_cast<long>(grid.size());
  const long k = static_cast<long>(rounded);
  const auto atoms = dm.atoms();

  std::vector<cplx> cur(g.samples().begin(), g.samples().end());
  std::vector<cplx> next(cur.size());
  auto wrap = [n](long j) { return static_cast<std::size_t>(((j % n) + n) % n); };
  for (int rep = 0; rep < dm.params().order; ++rep) {
    // (delta_v * g)(t) = g(t - v); the order-2s operator uses 2 lambda_u.
    for (long j = 0; j < n; ++j) {
      next[static_cast<std::size_t>(j)] = 2.0 * (atoms[0].weight * cur[wrap(j)] +
                                                 atoms[1].weight * cur[wrap(j - k)] +
                                                 atoms[2].weight * cur[wrap(j + k)]);
    }
    std::swap(cur, next);
  }
  return Signal(grid, std::move(cur));
}

ShiftSample sample_shifts(int m, double c, unsigned long long seed, int order) {
  if (m < 1) throw std::invalid_argument("need at least one shift");
  if (!(c > 0.0)) throw std::invalid_argument("shift window must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-c, c);
  ShiftSample out;
  out.shifts.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) out.shifts.push_back(dist(rng));
  out.below_guaranteed_count = m < 4 * order + 1;
  return out;
}

DecompositionResult decompose(const Params& p, const Signal& f, const std::vector<double>& shifts,
                              DecomposeOptions opts) {
  p.validate();
  if (shifts.empty()) throw std::invalid_argument("decomposition needs at least one shift");
  if (std::all_of(shifts.begin(), shifts.end(), [](double u) { return u == 0.0; }))
    throw DegenerateShifts("all shifts are zero: every difference symbol vanishes identically");

  const Spectrum F = forward_transform(f);
  if (opts.check_membership) {
    const MembershipReport rep = membership_test(p, F);
    if (rep.verdict != Verdict::member)
      throw MembershipRefused("signal is not a finite sum of generalised differences (verdict " +
                              to_string(rep.verdict) + ")");
  }

  const GridSpec& grid = f.grid();
  const std::size_t n = grid.size();
  std::vector<std::vector<double>> symbols;
  symbols.reserve(shifts.size());
  for (double u : shifts) symbols.push_back(symbol_on_nodes(DifferenceMeasure(u, p), grid));

  std::vector<double> denom(n, 0.0);
  for (const auto& sym : symbols)
    for (std::size_t i = 0; i < n; ++i) denom[i] += sym[i] * sym[i];

  DecompositionResult out{shifts, {}, Signal::zeros(grid), 0.0, {}};
  for (std::size_t i = 0; i < n; ++i)
    if (denom[i] < p.tau) out.degenerate_nodes.push_back(grid.frequency(i));
  if (out.degenerate_nodes.size() == n)
    throw DegenerateShifts("difference symbols vanish at every frequency node");

  out.components.reserve(shifts.size());
  for (const auto& sym : symbols) {
    std::vector<cplx> coeffs(n);
    for (std::size_t i = 0; i < n; ++i)
      if (denom[i] >= p.tau) coeffs[i] = F[i] * sym[i] / denom[i];
    out.components.push_back(inverse_transform(Spectrum(grid, std::move(coeffs))));
  }

  out.residual = f - reconstruct(p, out);
  const double norm_f = f.l2_norm();
  out.relative_residual = norm_f > 0.0 ? out.residual.l2_norm() / norm_f : 0.0;
  return out;
}

Signal reconstruct(const Params& p, const DecompositionResult& d) {
  return reconstruct(p, d.residual.grid(), d.shifts, d.components);
}

Signal reconstruct(const Params& p, const GridSpec& grid, const std::vector<double>& shifts,
                   const std::vector<Signal>& components) {
  if (shifts.size() != components.size())
    throw std::invalid_argument("shift and component counts differ");
  Spectrum acc = Spectrum::zeros(grid);
  auto& a = acc.mutable_coeffs();
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    const DifferenceMeasure dm(shifts[j], p);
    const Spectrum Fj = forward_transform(components[j]);
    if (!(Fj.grid() == grid)) throw std::invalid_argument("component lives on a different grid");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += difference_symbol(dm, Fj.frequency(i)) * Fj[i];
  }
  return inverse_transform(acc);
}

ProbeOutcome almost_everywhere_probe(const Params& p, const Signal& f, int draws, double c,
                                     unsigned long long seed) {
  if (draws < 1) throw std::invalid_argument("probe needs at least one draw");
  const MembershipReport rep = membership_test(p, f);
  if (rep.verdict != Verdict::member)
    throw MembershipRefused("probe needs a member signal (verdict " + to_string(rep.verdict) + ")");

  const int m = 4 * p.order + 1;
  ProbeOutcome out;
  out.draws = draws;
  for (int d = 0; d < draws; ++d) {
    const auto sample = sample_shifts(m, c, splitmix64(seed ^ splitmix64(static_cast<unsigned long long>(d))), p.order);
    try {
      const auto res = decompose(p, f, sample.shifts, {.check_membership = false});
      out.worst_relative_residual = std::max(out.worst_relative_residual, res.relative_residual);
      if (res.relative_residual <= 1e-8) ++out.successes;
    } catch (const DegenerateShifts&) {
      out.worst_relative_residual = 1.0;
    }
  }
  return out;
}

} // namespace gendiff
