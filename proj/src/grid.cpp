#include "gendiff/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace gendiff {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fftw_in_place(std::vector<cplx>& data, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// (-1)^k for the signed frequency index of slot i.
double alternating_sign(std::size_t i, std::size_t n) {
  const long k = static_cast<long>(i) - static_cast<long>(n / 2);
  return (k % 2 == 0) ? 1.0 : -1.0;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw std::invalid_argument("signals live on different grids");
}

} // namespace

GridSpec::GridSpec(double half_width, std::size_t n_samples)
    : half_width_(half_width), n_(n_samples),
      spacing_(2.0 * half_width / static_cast<double>(n_samples)) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive");
  if (n_samples < 4) throw std::invalid_argument("grid needs at least 4 samples");
  if (n_samples % 2 != 0) throw std::invalid_argument("grid sample count must be even");
}

double GridSpec::frequency_step() const { return std::numbers::pi / half_width_; }

double GridSpec::sample_point(std::size_t j) const {
  return -half_width_ + static_cast<double>(j) * spacing_;
}

double GridSpec::frequency(std::size_t i) const {
  const double k = static_cast<double>(static_cast<long>(i) - static_cast<long>(n_ / 2));
  return std::numbers::pi * k / half_width_;
}

bool GridSpec::contains_frequency(double x) const {
  return x >= min_frequency() && x <= max_frequency();
}

GridSpec make_grid(double half_width, std::size_t n_samples) {
  return GridSpec(half_width, n_samples);
}

Signal::Signal(GridSpec grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size())
    throw std::invalid_argument("signal has " + std::to_string(samples_.size()) +
                                " samples but grid expects " + std::to_string(grid_.size()));
}

Signal Signal::zeros(const GridSpec& grid) {
  return Signal(grid, std::vector<cplx>(grid.size()));
}

double Signal::energy() const {
  double acc = 0.0;
  for (const auto& v : samples_) acc += std::norm(v);
  return acc * grid_.spacing();
}

double Signal::l2_norm() const { return std::sqrt(energy()); }

Signal& Signal::operator+=(const Signal& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

Signal& Signal::operator-=(const Signal& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

Signal& Signal::operator*=(cplx a) {
  for (auto& v : samples_) v *= a;
  return *this;
}

Signal operator+(Signal a, const Signal& b) { return a += b; }
Signal operator-(Signal a, const Signal& b) { return a -= b; }
Signal operator*(cplx a, Signal f) { return f *= a; }

Spectrum::Spectrum(GridSpec grid, std::vector<cplx> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("spectrum has " + std::to_string(coeffs_.size()) +
                                " coefficients but grid expects " + std::to_string(grid_.size()));
}

Spectrum Spectrum::zeros(const GridSpec& grid) {
  return Spectrum(grid, std::vector<cplx>(grid.size()));
}

double Spectrum::energy() const {
  double acc = 0.0;
  for (const auto& v : coeffs_) acc += std::norm(v);
  return acc * grid_.frequency_step() / (2.0 * std::numbers::pi);
}

cplx Spectrum::interpolate(double x) const {
  if (!grid_.contains_frequency(x))
    throw std::out_of_range("interpolation frequency outside the node range");
  const double pos = (x - grid_.min_frequency()) / grid_.frequency_step();
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i >= coeffs_.size() - 1) return coeffs_.back();
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * coeffs_[i] + t * coeffs_[i + 1];
}

Spectrum forward_transform(const Signal& f) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.size();
  std::vector<cplx> work(f.samples().begin(), f.samples().end());
  fftw_in_place(work, FFTW_FORWARD);

  // fhat(x_k) ~ dx * sum_j f_j e^{-i x_k u_j} = dx * (-1)^k * DFT[k mod N]
  std::vector<cplx> coeffs(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = (i + half) % n;
    coeffs[i] = g.spacing() * alternating_sign(i, n) * work[m];
  }
  return Spectrum(g, std::move(coeffs));
}

Signal inverse_transform(const Spectrum& F) {
  const GridSpec& g = F.grid();
  const std::size_t n = g.size();
  const std::size_t half = n / 2;
  std::vector<cplx> work(n);
  for (std::size_t i = 0; i < n; ++i)
    work[(i + half) % n] = alternating_sign(i, n) * F[i];
  fftw_in_place(work, FFTW_BACKWARD);
  const double scale = 1.0 / (2.0 * g.half_width());
  for (auto& v : work) v *= scale;
  return Signal(g, std::move(work));
}

double plancherel_defect(const Signal& f) {
  return std::abs(f.energy() - forward_transform(f).energy());
}

Signal synthesize_test_member(const GridSpec& grid, double alpha, double beta, int p,
                              double envelope_width) {
  return synthesize_test_member(grid, alpha, beta, p, envelope_width, 0.5 * (alpha + beta));
}

Signal synthesize_test_member(const GridSpec& grid, double alpha, double beta, int p,
                              double envelope_width, double center) {
  if (!grid.contains_frequency(alpha) || !grid.contains_frequency(beta))
    throw std::invalid_argument("alpha and beta must lie inside the grid frequency range");
  if (p < 0) throw std::invalid_argument("zero order p must be nonnegative");
  if (!(envelope_width > 0.0)) throw std::invalid_argument("envelope width must be positive");

  std::vector<cplx> coeffs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.frequency(i);
    const double z = (x - center) / envelope_width;
    const double poly = std::pow((x - alpha) * (x - beta), p);
    coeffs[i] = poly * std::exp(-0.5 * z * z);
  }
  Spectrum spectrum(grid, std::move(coeffs));

  auto peak = [](std::span<const cplx> v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  };
  const double spectrum_peak = peak(spectrum.coeffs());
  if (std::abs(spectrum[0]) > 1e-12 * spectrum_peak || std::abs(spectrum[grid.size() - 1]) > 1e-12 * spectrum_peak)
    throw std::invalid_argument("test member spectrum does not decay before the Nyquist edge");

  Signal f = inverse_transform(spectrum);
  const double time_peak = peak(f.samples());
  if (std::abs(f[0]) > 1e-12 * time_peak || std::abs(f[grid.size() - 1]) > 1e-12 * time_peak)
    throw std::invalid_argument("test member does not decay at the edges of the spatial window");
  return f;
}

Signal random_smooth_signal(const GridSpec& grid, unsigned long long seed, int bumps) {
  if (bumps < 1) throw std::invalid_argument("need at least one bump");
  // Width floor keeps exp(-w^2 L^2 / 2) below 1e-12 at the window edge.
  const double w_min = std::max(1.0, 8.0 / grid.half_width());
  const double w_max = 2.0 * w_min;
  const double c_max = std::min(5.0, grid.max_frequency() - 10.0 * w_max);
  if (c_max < 0.0) throw std::invalid_argument("grid too coarse for smooth random signals");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-c_max, c_max);
  std::uniform_real_distribution<double> width(w_min, w_max);
  std::normal_distribution<double> amp(0.0, 1.0);

  std::vector<cplx> coeffs(grid.size());
  for (int b = 0; b < bumps; ++b) {
    const double c = center(rng);
    const double w = width(rng);
    const cplx a(amp(rng), amp(rng));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double z = (grid.frequency(i) - c) / w;
      coeffs[i] += a * std::exp(-0.5 * z * z);
    }
  }
  return inverse_transform(Spectrum(grid, std::move(coeffs)));
}

} // namespace gendiff
