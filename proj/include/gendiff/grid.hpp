// Uniform-grid model of L^2(R): signals sampled on [-L, L) and their
// continuous-Fourier-transform approximations.
//
// Transform convention (non-unitary):
//   fhat(x) = \int e^{-ixu} f(u) du,     f(u) = (1/2pi) \int e^{ixu} fhat(x) dx
// so Plancherel reads ||f||^2 = (1/2pi) ||fhat||^2.

#ifndef GENDIFF_GRID_HPP
#define GENDIFF_GRID_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gendiff {

using cplx = std::complex<double>;

/// Spatial grid u_j = -L + j*dx (j = 0..N-1) with dual frequency nodes
/// x_k = pi*k/L for k = -N/2 .. N/2-1. Spectrum index i holds k = i - N/2.
class GridSpec {
public:
  GridSpec(double half_width, std::size_t n_samples);

  double half_width() const { return half_width_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  /// pi / L
  double frequency_step() const;
  double sample_point(std::size_t j) const;
  /// Frequency of spectrum slot i (ascending in i).
  double frequency(std::size_t i) const;
  double min_frequency() const { return frequency(0); }
  double max_frequency() const { return frequency(n_ - 1); }
  bool contains_frequency(double x) const;

  bool operator==(const GridSpec&) const = default;

private:
  double half_width_;
  std::size_t n_;
  double spacing_;
};

/// Throws std::invalid_argument unless L > 0, N even, N >= 4.
GridSpec make_grid(double half_width, std::size_t n_samples);

class Signal {
public:
  Signal(GridSpec grid, std::vector<cplx> samples);
  static Signal zeros(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const cplx> samples() const { return samples_; }
  std::vector<cplx>& mutable_samples() { return samples_; }
  const cplx& operator[](std::size_t j) const { return samples_[j]; }
  std::size_t size() const { return samples_.size(); }

  /// Grid quadrature of \int |f|^2 du.
  double energy() const;
  double l2_norm() const;

  Signal& operator+=(const Signal& other);
  Signal& operator-=(const Signal& other);
  Signal& operator*=(cplx a);

private:
  GridSpec grid_;
  std::vector<cplx> samples_;
};

Signal operator+(Signal a, const Signal& b);
Signal operator-(Signal a, const Signal& b);
Signal operator*(cplx a, Signal f);

class Spectrum {
public:
  Spectrum(GridSpec grid, std::vector<cplx> coeffs);
  static Spectrum zeros(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::vector<cplx>& mutable_coeffs() { return coeffs_; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }
  double frequency(std::size_t i) const { return grid_.frequency(i); }

  /// Frequency-side energy (1/2pi) \int |F|^2 dx on the node lattice.
  double energy() const;

  /// Piecewise-linear interpolation of the coefficients at an arbitrary
  /// frequency inside the node range.
  cplx interpolate(double x) const;

private:
  GridSpec grid_;
  std::vector<cplx> coeffs_;
};

Spectrum forward_transform(const Signal& f);
Signal inverse_transform(const Spectrum& F);

/// |‖f‖^2 - (1/2pi)‖fhat‖^2| using grid quadrature on both sides.
double plancherel_defect(const Signal& f);

/// Builds f with fhat(x) = (x-alpha)^p (x-beta)^p G(x), where
/// G(x) = exp(-(x-center)^2 / (2 w^2)) and center defaults to (alpha+beta)/2.
/// Throws if alpha or beta fall outside the frequency range, or if the
/// result does not decay below 1e-12 (relative) at both ends of the spatial
/// window or at the Nyquist edges.
Signal synthesize_test_member(const GridSpec& grid, double alpha, double beta,
                              int p, double envelope_width);
Signal synthesize_test_member(const GridSpec& grid, double alpha, double beta,
                              int p, double envelope_width, double center);

/// Random smooth (Schwartz-like) signal: a sum of `bumps` Gaussian bumps in
/// frequency with random centers, widths and complex amplitudes, scaled so it
/// decays below 1e-12 inside the spatial window. Deterministic in `seed`.
Signal random_smooth_signal(const GridSpec& grid, unsigned long long seed, int bumps = 3);

} // namespace gendiff

#endif
