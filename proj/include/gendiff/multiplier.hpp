// The operator T = (D^2 - i(alpha+beta)D - alpha*beta I)^s realised as a
// Fourier multiplier with symbol (-1)^s (x-alpha)^s (x-beta)^s, together with
// the membership test for its range and the two inner products involved.

#ifndef GENDIFF_MULTIPLIER_HPP
#define GENDIFF_MULTIPLIER_HPP

#include "gendiff/grid.hpp"

#include <array>
#include <string>

namespace gendiff {

struct Params {
  double alpha = 0.0;
  double beta = 0.0;
  int order = 1;
  /// Initial exclusion radius around alpha and beta for singular quadrature.
  double eps0 = 1.0;
  /// Minimum admissible symbol magnitude for spectral division.
  double tau = 1e-12;
  /// Growth exponent at or below which a signal is classified as a member.
  double q_tol = 0.1;

  void validate() const;
  bool operator==(const Params&) const = default;
};

/// Growth exponent at or above which a signal is classified as a non-member.
inline constexpr double kNonMemberExponent = 0.5;

enum class Verdict { member, non_member, inconclusive };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct MembershipReport {
  /// I(eps0), I(eps0/2), I(eps0/4); nondecreasing.
  std::array<double, 3> integrals{};
  double growth_exponent = 0.0;
  Verdict verdict = Verdict::inconclusive;
  /// (1/2pi) \int |fhat|^2 over the innermost exclusion zones.
  double excluded_mass = 0.0;
  /// (1/2pi) h |fhat|^2 summed over nodes lying exactly on alpha or beta.
  double on_node_mass = 0.0;
};

cplx symbol_T(const Params& p, double x);

Signal apply_T(const Params& p, const Signal& g);

struct SolveResult {
  Signal solution;
  /// L^2 energy of the right-hand side on nodes where |symbol| < tau.
  double dropped_energy = 0.0;
  /// Set when dropped_energy exceeds 1e-12 of the right-hand side energy.
  bool degenerate_warning = false;
};

/// Spectral division by the symbol. Refuses non-members with
/// MembershipRefused unless `force` is set.
SolveResult solve_T(const Params& p, const Signal& h, bool force = false);

/// |F|^2 (x-alpha)^{-2s} (x-beta)^{-2s}; caller keeps x off the singularities.
double membership_integrand(const Params& p, cplx F, double x);
double membership_integrand(const Params& p, const Spectrum& F, std::size_t node);

/// Truncated singular integrals at radii eps0, eps0/2, eps0/4, the fitted
/// growth exponent and the resulting verdict.
MembershipReport membership_test(const Params& p, const Signal& f);
MembershipReport membership_test(const Params& p, const Spectrum& F);

/// <f,g>_{alpha,beta,s}; refuses non-members.
cplx weighted_inner_product(const Params& p, const Signal& f, const Signal& g);

/// <f,g>_{R,s} = \int (1 + |x|^{2s}) fhat conj(ghat) dx, s >= 1.
cplx sobolev_inner_product(int order, const Signal& f, const Signal& g);

struct ProbeResult {
  /// max over trials of ||T g||^2_{alpha,beta,s} / ||g||^2_{R,2s}
  double max_ratio = 0.0;
  /// sup_x ((x-alpha)^{2s}(x-beta)^{2s} + 1) / (1 + x^{4s}), densely sampled.
  double analytic_bound = 0.0;
  int trials = 0;
  bool within_bound() const { return max_ratio <= analytic_bound * (1.0 + 1e-6); }
};

/// Dense-sampling estimate of the operator-norm bound K.
double analytic_bound_K(const Params& p);

ProbeResult boundedness_probe(const Params& p, const GridSpec& grid, int trials,
                              unsigned long long seed = 1);

} // namespace gendiff

#endif
