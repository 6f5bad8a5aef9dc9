// Exact finite-cyclic-group model: signals on Z_N, generalised
// (alpha,beta)-differences with group-element shifts, and decompositions
// computed with direct DFT sums. Serves as a grid-error-free oracle for the
// sampled real-line pipeline.
//
// Conventions: fhat(n) = (1/N) sum_j f_j e^{-2 pi i j n / N}, and a shift by
// the group element u corresponds to the angle theta = 2 pi u / N.

#ifndef GENDIFF_CIRCLE_HPP
#define GENDIFF_CIRCLE_HPP

#include "gendiff/grid.hpp"

#include <vector>

namespace gendiff::circle {

class CircleSignal {
public:
  explicit CircleSignal(std::vector<cplx> samples);
  static CircleSignal from_dft(std::vector<cplx> dft);

  long modulus() const { return static_cast<long>(samples_.size()); }
  const std::vector<cplx>& samples() const { return samples_; }
  const std::vector<cplx>& dft() const { return dft_; }
  /// sqrt(sum_n |fhat(n)|^2), which equals the RMS of the samples.
  double norm() const;

private:
  CircleSignal(std::vector<cplx> samples, std::vector<cplx> dft);
  std::vector<cplx> samples_;
  std::vector<cplx> dft_;
};

/// Direct O(N^2) transforms with twiddles reduced modulo N.
std::vector<cplx> exact_dft(const std::vector<cplx>& samples);
std::vector<cplx> exact_inverse_dft(const std::vector<cplx>& dft);

/// Representative of k in [0, N).
long mod(long k, long n);

struct CircleAtom {
  long location; ///< group element in [0, N)
  cplx weight;
};

/// Atoms of 2 lambda_u on Z_N: 2cos(theta(alpha-beta)/2) at 0 and
/// -e^{+-i theta (alpha+beta)/2} at +-u. alpha and beta are reduced mod N.
std::vector<CircleAtom> difference_atoms(long n, long alpha, long beta, long u);

/// (2(cos(theta(alpha-beta)/2) - cos(theta(n-(alpha+beta)/2))))^s, evaluated
/// as (4 sin(theta(n-alpha)/2) sin(theta(n-beta)/2))^s with integer angle
/// reduction, so zeros are exact.
double circle_difference_symbol(long modulus, int order, long alpha, long beta, long u, long n);

/// s-fold convolution with the atoms of 2 lambda_u.
CircleSignal apply_circle_difference(const CircleSignal& g, int order, long alpha, long beta, long u);

/// True iff fhat(alpha) and fhat(beta) vanish to 1e-12 relative to ||f||.
bool circle_characterize(const CircleSignal& f, long alpha, long beta, int order);

struct CircleDecomposition {
  std::vector<long> shifts;
  std::vector<CircleSignal> components;
  CircleSignal residual;
  double relative_residual = 0.0;
};

/// Least-squares split over the shift set on Z_N. Throws MembershipRefused when the
/// character conditions fail and InfeasibleShifts naming the first frequency
/// n outside {alpha, beta} where every symbol vanishes while fhat(n) != 0.
CircleDecomposition circle_decompose(const CircleSignal& f, long alpha, long beta, int order,
                                     const std::vector<long>& shifts);

/// Sum of the differences applied to the components (time-domain atoms).
CircleSignal circle_reconstruct(const CircleDecomposition& d, long alpha, long beta, int order);

/// Frequencies outside {alpha, beta} where every symbol of the shift set
/// vanishes.
std::vector<long> common_symbol_zeros(long modulus, int order, long alpha, long beta,
                                      const std::vector<long>& shifts);

} // namespace gendiff::circle

#endif
