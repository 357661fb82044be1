#pragma once
//
// One-dimensional wave mechanics on a periodic grid, aimed at the unitary
// translation operator exp(ip*l) (p = -i d/dx, hbar = 1) as an observable:
// two-packet expectation values, spectral momentum moments, and the
// phase-kick exchange signature.
//
#include <complex>
#include <cstddef>
#include <vector>

#include "lawless/state_geometry.hpp"

namespace lawless {

// Samples of psi on x_j = j * (length/G), j = 0..G-1, G a power of two,
// periodic wrap semantics, grid norm sum |psi|^2 dx = 1 within 1e-9.
struct WavePacketGrid {
  std::vector<Complex> samples;
  double length = 0.0;

  // construction metadata (diagnostics + exchange report)
  bool two_packet = false;
  double sigma = 0.0;
  double center = 0.0;   // first hump
  double sep = 0.0;      // snapped to the grid
  double alpha = 0.0;
  double overlap = 0.0;  // |integral f(x) f(x - sep) dx| actually realized

  double dx() const { return length / static_cast<double>(samples.size()); }
  double norm_sq() const;
};

// Single Gaussian hump, |f|^2 = N(center, sigma^2), needs +-6 sigma of room.
WavePacketGrid make_gaussian_packet(double sigma, double center,
                                    std::size_t grid, double length);

// psi = (f(x) + e^{i alpha} f(x - sep)) / sqrt(2), sep snapped to the grid so
// the displaced hump is an exact index shift.  OverlapViolation when the
// humps overlap beyond 1e-8; DomainTooSmall when +-6 sigma does not fit.
WavePacketGrid make_two_packet(double sigma, double center, double sep,
                               double alpha, std::size_t grid, double length);

struct TranslationResult {
  Complex value;
  long long steps = 0;      // grid steps actually shifted
  double snap_error = 0.0;  // |ell - steps * dx|
};

// <psi| exp(ip ell) |psi> = sum psi*(x) psi(x + ell) dx by exact index shift.
TranslationResult translation_expectation_detail(const WavePacketGrid& psi,
                                                 double ell);
Complex translation_expectation(const WavePacketGrid& psi, double ell);

// <p^n> by Fourier multiplication with k^n (signed frequencies).  n <= 6;
// the imaginary part must stay below 1e-8 or ToleranceExceeded is raised.
double momentum_moment(const WavePacketGrid& psi, int n);

struct ModularExchangeReport {
  double alpha = 0.0;
  Complex before;                     // <exp(ip sep)> of the input
  Complex after;                      // same, after the phase kick
  Complex delta_translation;          // after - before; (e^{i alpha} - 1)/2
  std::vector<double> delta_moment;   // <p^n> changes, n = 1..nmax; all ~0
};

// Applies the phase e^{i alpha} to the displaced packet term (tails included)
// and reports what changed: the modular expectation moves by
// (e^{i alpha} - 1)/2, every ordinary momentum moment stays put.
ModularExchangeReport modular_exchange_report(const WavePacketGrid& psi0,
                                              double alpha, int nmax);

}  // namespace lawless
