// Generalised (alpha,beta)-differences of order 2s and the constructive
// decomposition of a range member into a sum of them.
//
// The basic measure for a shift u is
//   lambda_u = cos(u(alpha-beta)/2) delta_0
//              - 1/2 e^{iu(alpha+beta)/2} delta_u - 1/2 e^{-iu(alpha+beta)/2} delta_{-u}
// and the order-2s difference operator convolves with (2 lambda_u)^{*s}.

#ifndef GENDIFF_DIFFERENCE_HPP
#define GENDIFF_DIFFERENCE_HPP

#include "gendiff/grid.hpp"
#include "gendiff/multiplier.hpp"

#include <array>
#include <vector>

namespace gendiff {

struct Atom {
  double location;
  cplx weight;
};

class DifferenceMeasure {
public:
  DifferenceMeasure(double shift, const Params& params);

  double shift() const { return shift_; }
  const Params& params() const { return params_; }

  /// Atoms of lambda_u, in the order {0, +u, -u}. The two exponentials at 0
  /// are already combined into cos(u(alpha-beta)/2).
  std::array<Atom, 3> atoms() const;

  /// Transform of lambda_u, real: 2 sin(u(x-alpha)/2) sin(u(x-beta)/2).
  double lambda_hat(double x) const;

private:
  double shift_;
  Params params_;
};

/// Symbol of the order-2s difference, (2 lambda_hat_u(x))^s. Real, and zero
/// exactly at x = alpha and x = beta.
double difference_symbol(const DifferenceMeasure& dm, double x);

/// Frequency-domain application of the order-2s difference.
Signal apply_difference(const DifferenceMeasure& dm, const Signal& g);

/// Time-domain application by s-fold circular convolution with the atoms.
/// Only defined when the shift is an integer multiple of the grid spacing.
Signal apply_difference_time_domain(const DifferenceMeasure& dm, const Signal& g);

struct ShiftSample {
  std::vector<double> shifts;
  /// m < 4s+1: a decomposition is no longer guaranteed.
  bool below_guaranteed_count = false;
};

/// m independent uniform draws from [-c, c], deterministic in seed.
ShiftSample sample_shifts(int m, double c, unsigned long long seed, int order);

struct DecompositionResult {
  std::vector<double> shifts;
  std::vector<Signal> components;
  Signal residual;
  double relative_residual = 0.0;
  /// Frequencies where sum_k |M_k|^2 < tau.
  std::vector<double> degenerate_nodes;
};

struct DecomposeOptions {
  /// Run membership_test first and refuse non-members.
  bool check_membership = true;
};

DecompositionResult decompose(const Params& p, const Signal& f, const std::vector<double>& shifts,
                              DecomposeOptions opts = {});

/// sum_j (difference of shift u_j) * f_j; the zero signal when empty.
Signal reconstruct(const Params& p, const DecompositionResult& d);
Signal reconstruct(const Params& p, const GridSpec& grid, const std::vector<double>& shifts,
                   const std::vector<Signal>& components);

struct ProbeOutcome {
  int draws = 0;
  int successes = 0;
  double worst_relative_residual = 0.0;
  double success_fraction() const {
    return draws == 0 ? 0.0 : static_cast<double>(successes) / draws;
  }
};

/// Decomposes f with `draws` fresh tuples of 4s+1 shifts from [-c,c]^{4s+1};
/// a draw succeeds when its relative residual is at most 1e-8.
ProbeOutcome almost_everywhere_probe(const Params& p, const Signal& f, int draws, double c,
                                     unsigned long long seed = 1);

} // namespace gendiff

#endif
