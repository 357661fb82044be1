#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace lawless {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// A ray in C^n. The stored representative is unit norm with the first
// amplitude of magnitude > kZeroTol rotated onto the positive real axis, so
// equal rays have identical representatives up to roundoff.
class PureState {
 public:
  static constexpr double kZeroTol = 1e-12;

  // Normalizes and gauge-fixes. Throws EmptyInput for dim 0, ZeroVector when
  // the norm is <= kZeroTol.
  explicit PureState(Vec amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vec& amplitudes() const { return amps_; }

  // Ray equality: |<a|b>| within 1e-12 of 1.
  bool operator==(const PureState& other) const;

 private:
  Vec amps_;
};

PureState make_state(const std::vector<Complex>& amplitudes);
PureState make_state(std::initializer_list<Complex> amplitudes);
PureState make_state(const Vec& amplitudes);

// Angle s in [0, pi] with cos(s/2) = |<a|b>| (overlap clamped to [0, 1]).
// Throws DimensionMismatch.
double fs_distance(const PureState& a, const PureState& b);

// |<a|b>|^2 == cos^2(s/2).
double transition_probability(const PureState& a, const PureState& b);

// Normalized sum of representatives with <a|b> rotated real positive; the
// result is equidistant from both inputs at half their separation. Throws
// AmbiguousMidpoint when the inputs are orthogonal (|<a|b>| <= 1e-12).
PureState geodesic_midpoint(const PureState& a, const PureState& b);

bool same_ray(const PureState& a, const PureState& b, double tol = 1e-12);

}  // namespace lawless
