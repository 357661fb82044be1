#include "lawless/state_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lawless/error.hpp"

namespace lawless {

PureState::PureState(Vec amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) fail("EmptyInput", "state needs at least one amplitude");
  double norm = amps_.norm();
  if (norm <= kZeroTol) fail("ZeroVector", "cannot normalize a (near-)zero vector");
  amps_ /= norm;
  for (Eigen::Index i = 0; i < amps_.size(); ++i) {
    double mag = std::abs(amps_[i]);
    if (mag > kZeroTol) {
      amps_ *= std::conj(amps_[i]) / mag;  // rotate first nonzero amplitude real positive
      amps_[i] = Complex(mag, 0.0);        // kill the residual imaginary dust
      break;
    }
  }
}

bool PureState::operator==(const PureState& other) const {
  return same_ray(*this, other, 1e-12);
}

PureState make_state(const std::vector<Complex>& amplitudes) {
  Vec v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) v[static_cast<Eigen::Index>(i)] = amplitudes[i];
  return PureState(std::move(v));
}

PureState make_state(std::initializer_list<Complex> amplitudes) {
  return make_state(std::vector<Complex>(amplitudes));
}

PureState make_state(const Vec& amplitudes) { return PureState(amplitudes); }

namespace {

double overlap_magnitude(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim())
    fail("DimensionMismatch", "states live in different dimensions (" +
                                  std::to_string(a.dim()) + " vs " +
                                  std::to_string(b.dim()) + ")");
  return std::abs(a.amplitudes().dot(b.amplitudes()));  // Eigen dot conjugates the left factor
}

}  // namespace

double fs_distance(const PureState& a, const PureState& b) {
  double ov = std::clamp(overlap_magnitude(a, b), 0.0, 1.0);
  return 2.0 * std::acos(ov);
}

double transition_probability(const PureState& a, const PureState& b) {
  double ov = std::clamp(overlap_magnitude(a, b), 0.0, 1.0);
  return ov * ov;
}

PureState geodesic_midpoint(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) fail("DimensionMismatch", "midpoint of mismatched dimensions");
  Complex ov = a.amplitudes().dot(b.amplitudes());
  double mag = std::abs(ov);
  if (mag <= 1e-12)
    fail("AmbiguousMidpoint", "orthogonal states admit a great circle of midpoints");
  // Rotate b so the mutual overlap is real positive, then average.
  Vec aligned = b.amplitudes() * (std::conj(ov) / mag);
  return PureState(a.amplitudes() + aligned);
}

bool same_ray(const PureState& a, const PureState& b, double tol) {
  return std::abs(overlap_magnitude(a, b) - 1.0) <= tol;
}

}  // namespace lawless
