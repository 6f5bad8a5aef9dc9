#include "gendiff/circle.hpp"

#include "gendiff/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gendiff::circle {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{i pi k / d} with k reduced modulo 2d and exact values on the axes.
cplx exp_i_pi_frac(long k, long d) {
  const long r = mod(k, 2 * d);
  if (r == 0) return {1.0, 0.0};
  if (r == d) return {-1.0, 0.0};
  if (2 * r == d) return {0.0, 1.0};
  if (2 * r == 3 * d) return {0.0, -1.0};
  const double angle = kPi * static_cast<double>(r) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

double sin_pi_frac(long k, long d) { return exp_i_pi_frac(k, d).imag(); }

void require_modulus(long n) {
  if (n < 1) throw std::invalid_argument("modulus must be positive");
}

} // namespace

long mod(long k, long n) {
  const long r = k % n;
  return r < 0 ? r + n : r;
}

std::vector<cplx> exact_dft(const std::vector<cplx>& samples) {
  const long n = static_cast<long>(samples.size());
  require_modulus(n);
  std::vector<cplx> out(samples.size());
  for (long k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (long j = 0; j < n; ++j) acc += samples[j] * exp_i_pi_frac(-2 * mod(j * k, n), n);
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<cplx> exact_inverse_dft(const std::vector<cplx>& dft) {
  const long n = static_cast<long>(dft.size());
  require_modulus(n);
  std::vector<cplx> out(dft.size());
  for (long j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (long k = 0; k < n; ++k) acc += dft[k] * exp_i_pi_frac(2 * mod(j * k, n), n);
    out[j] = acc;
  }
  return out;
}

CircleSignal::CircleSignal(std::vector<cplx> samples)
    : samples_(std::move(samples)), dft_(exact_dft(samples_)) {}

CircleSignal::CircleSignal(std::vector<cplx> samples, std::vector<cplx> dft)
    : samples_(std::move(samples)), dft_(std::move(dft)) {}

CircleSignal CircleSignal::from_dft(std::vector<cplx> dft) {
  auto samples = exact_inverse_dft(dft);
  return CircleSignal(std::move(samples), std::move(dft));
}

double CircleSignal::norm() const {
  double acc = 0.0;
  for (const auto& c : dft_) acc += std::norm(c);
  return std::sqrt(acc);
}

std::vector<CircleAtom> difference_atoms(long n, long alpha, long beta, long u) {
  require_modulus(n);
  const long a = mod(alpha, n), b = mod(beta, n), v = mod(u, n);
  // theta (alpha -+ beta) / 2 = pi u (alpha -+ beta) / N
  const double centre = 2.0 * exp_i_pi_frac(v * (a - b), n).real();
  const cplx phase = exp_i_pi_frac(v * (a + b), n);
  return {{0, cplx(centre, 0.0)}, {v, -phase}, {mod(-v, n), -std::conj(phase)}};
}

double circle_difference_symbol(long modulus, int order, long alpha, long beta, long u, long n) {
  require_modulus(modulus);
  if (order < 1) throw std::invalid_argument("order s must be at least 1");
  const long a = mod(alpha, modulus), b = mod(beta, modulus);
  const long v = mod(u, modulus), k = mod(n, modulus);
  const double base = 4.0 * sin_pi_frac(v * (k - a), modulus) * sin_pi_frac(v * (k - b), modulus);
  return std::pow(base, order);
}

CircleSignal apply_circle_difference(const CircleSignal& g, int order, long alpha, long beta, long u) {
  if (order < 1) throw std::invalid_argument("order s must be at least 1");
  const long n = g.modulus();
  const auto atoms = difference_atoms(n, alpha, beta, u);
  std::vector<cplx> cur = g.samples();
  std::vector<cplx> next(cur.size());
  for (int rep = 0; rep < order; ++rep) {
    for (long j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (const auto& at : atoms) acc += at.weight * cur[mod(j - at.location, n)];
      next[j] = acc;
    }
    std::swap(cur, next);
  }
  return CircleSignal(std::move(cur));
}

bool circle_characterize(const CircleSignal& f, long alpha, long beta, int order) {
  if (order < 1) throw std::invalid_argument("order s must be at least 1");
  const long n = f.modulus();
  const double tol = 1e-12 * f.norm();
  return std::abs(f.dft()[mod(alpha, n)]) <= tol && std::abs(f.dft()[mod(beta, n)]) <= tol;
}

std::vector<long> common_symbol_zeros(long modulus, int order, long alpha, long beta,
                                      const std::vector<long>& shifts) {
  std::vector<long> zeros;
  const long a = mod(alpha, modulus), b = mod(beta, modulus);
  for (long k = 0; k < modulus; ++k) {
    if (k == a || k == b) continue;
    bool all_zero = true;
    for (long u : shifts)
      if (circle_difference_symbol(modulus, order, alpha, beta, u, k) != 0.0) {
        all_zero = false;
        break;
      }
    if (all_zero) zeros.push_back(k);
  }
  return zeros;
}

CircleDecomposition circle_decompose(const CircleSignal& f, long alpha, long beta, int order,
                                     const std::vector<long>& shifts) {
  if (shifts.empty()) throw std::invalid_argument("decomposition needs at least one shift");
  if (!circle_characterize(f, alpha, beta, order))
    throw MembershipRefused("fhat(alpha) or fhat(beta) is nonzero");

  const long n = f.modulus();
  const long a = mod(alpha, n), b = mod(beta, n);
  const double tol = 1e-12 * f.norm();

  std::vector<std::vector<double>> sym(shifts.size(), std::vector<double>(n));
  for (std::size_t j = 0; j < shifts.size(); ++j)
    for (long k = 0; k < n; ++k) sym[j][k] = circle_difference_symbol(n, order, alpha, beta, shifts[j], k);

  std::vector<std::vector<cplx>> comp(shifts.size(), std::vector<cplx>(n));
  for (long k = 0; k < n; ++k) {
    if (k == a || k == b) continue;
    double denom = 0.0;
    for (const auto& s : sym) denom += s[k] * s[k];
    if (denom == 0.0) {
      if (std::abs(f.dft()[k]) > tol)
        throw InfeasibleShifts("every symbol vanishes at frequency " + std::to_string(k) +
                                   " where the signal has energy",
                               k);
      continue;
    }
    for (std::size_t j = 0; j < shifts.size(); ++j) comp[j][k] = f.dft()[k] * sym[j][k] / denom;
  }

  CircleDecomposition out{shifts, {}, CircleSignal(std::vector<cplx>(n)), 0.0};
  out.components.reserve(shifts.size());
  for (auto& c : comp) out.components.push_back(CircleSignal::from_dft(std::move(c)));

  const CircleSignal rec = circle_reconstruct(out, alpha, beta, order);
  std::vector<cplx> res(n);
  for (long j = 0; j < n; ++j) res[j] = f.samples()[j] - rec.samples()[j];
  out.residual = CircleSignal(std::move(res));
  const double fn = f.norm();
  out.relative_residual = fn > 0.0 ? out.residual.norm() / fn : 0.0;
  return out;
}

CircleSignal circle_reconstruct(const CircleDecomposition& d, long alpha, long beta, int order) {
  const long n = d.residual.modulus();
  std::vector<cplx> acc(n);
  for (std::size_t j = 0; j < d.shifts.size(); ++j) {
    const CircleSignal part = apply_circle_difference(d.components[j], order, alpha, beta, d.shifts[j]);
    for (long k = 0; k < n; ++k) acc[k] += part.samples()[k];
  }
  return CircleSignal(std::move(acc));
}

} // namespace gendiff::circle
