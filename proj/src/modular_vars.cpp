#include "lawless/modular_vars.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "lawless/error.hpp"

namespace lawless {

namespace {

constexpr double kOverlapGate = 1e-8;
constexpr double kNormTol = 1e-9;

bool power_of_two(std::size_t g) { return g >= 4 && (g & (g - 1)) == 0; }

void check_grid(const WavePacketGrid& psi) {
  if (!power_of_two(psi.samples.size()))
    fail("InvalidArgument", "grid length must be a power of two >= 4");
  if (!(psi.length > 0.0)) fail("InvalidArgument", "domain length must be positive");
  if (std::abs(psi.norm_sq() - 1.0) > kNormTol)
    fail("ToleranceExceeded", "wave packet is not grid-normalized within 1e-9");
}

std::vector<double> sample_hump(double sigma, double center, std::size_t grid,
                                double length) {
  // amplitude normalized so that the continuum integral of f^2 is 1
  const double dx = length / static_cast<double>(grid);
  const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  std::vector<double> f(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    double x = static_cast<double>(j) * dx - center;
    f[j] = amp * std::exp(-x * x / (4.0 * sigma * sigma));
  }
  return f;
}

void check_support(double sigma, double lo_center, double hi_center,
                   double length) {
  if (lo_center - 6.0 * sigma < 0.0 || hi_center + 6.0 * sigma > length)
    fail("DomainTooSmall", "need +-6 sigma of room around every hump; got centers " +
                               std::to_string(lo_center) + ", " +
                               std::to_string(hi_center) + " in [0, " +
                               std::to_string(length) + ")");
}

void normalize(WavePacketGrid& psi) {
  double scale = 1.0 / std::sqrt(psi.norm_sq());
  for (auto& s : psi.samples) s *= scale;
}

// FFTW's planner is the one piece of shared mutable state here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void fft_in_place(std::vector<Complex>& data, int direction) {
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), raw, raw, direction,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

double WavePacketGrid::norm_sq() const {
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return acc * dx();
}

WavePacketGrid make_gaussian_packet(double sigma, double center,
                                    std::size_t grid, double length) {
  if (!(sigma > 0.0)) fail("InvalidArgument", "sigma must be positive");
  if (!power_of_two(grid)) fail("InvalidArgument", "grid length must be a power of two >= 4");
  if (!(length > 0.0)) fail("InvalidArgument", "domain length must be positive");
  check_support(sigma, center, center, length);
  WavePacketGrid psi;
  psi.length = length;
  psi.sigma = sigma;
  psi.center = center;
  auto f = sample_hump(sigma, center, grid, length);
  psi.samples.assign(f.begin(), f.end());
  normalize(psi);
  return psi;
}

WavePacketGrid make_two_packet(double sigma, double center, double sep,
                               double alpha, std::size_t grid, double length) {
  if (!(sigma > 0.0)) fail("InvalidArgument", "sigma must be positive");
  if (!(sep > 0.0)) fail("InvalidArgument", "separation must be positive");
  if (!power_of_two(grid)) fail("InvalidArgument", "grid length must be a power of two >= 4");
  if (!(length > 0.0)) fail("InvalidArgument", "domain length must be positive");

  const double dx = length / static_cast<double>(grid);
  const long long steps = std::llround(sep / dx);
  const double snapped = static_cast<double>(steps) * dx;
  if (steps < 1) fail("InvalidArgument", "separation is below one grid step");
  check_support(sigma, center, center + snapped, length);

  auto f = sample_hump(sigma, center, grid, length);
  const auto G = static_cast<long long>(grid);
  double overlap = 0.0;
  for (long long j = 0; j < G; ++j)
    overlap += f[static_cast<std::size_t>(j)] *
               f[static_cast<std::size_t>(((j - steps) % G + G) % G)];
  overlap *= dx;
  if (std::abs(overlap) > kOverlapGate)
    fail("OverlapViolation", "displaced hump overlaps the first one (integral " +
                                 std::to_string(overlap) + " > 1e-8)");

  WavePacketGrid psi;
  psi.length = length;
  psi.two_packet = true;
  psi.sigma = sigma;
  psi.center = center;
  psi.sep = snapped;
  psi.alpha = alpha;
  psi.overlap = std::abs(overlap);
  psi.samples.resize(grid);
  const Complex phase = std::polar(1.0, alpha);
  for (long long j = 0; j < G; ++j) {
    double first = f[static_cast<std::size_t>(j)];
    double second = f[static_cast<std::size_t>(((j - steps) % G + G) % G)];
    psi.samples[static_cast<std::size_t>(j)] = (first + phase * second);
  }
  normalize(psi);
  return psi;
}

TranslationResult translation_expectation_detail(const WavePacketGrid& psi,
                                                 double ell) {
  check_grid(psi);
  const double dx = psi.dx();
  TranslationResult out;
  out.steps = std::llround(ell / dx);
  out.snap_error = std::abs(ell - static_cast<double>(out.steps) * dx);
  const auto G = static_cast<long long>(psi.samples.size());
  Complex acc(0.0, 0.0);
  for (long long j = 0; j < G; ++j) {
    long long shifted = ((j + out.steps) % G + G) % G;
    acc += std::conj(psi.samples[static_cast<std::size_t>(j)]) *
           psi.samples[static_cast<std::size_t>(shifted)];
  }
  out.value = acc * dx;
  return out;
}

Complex translation_expectation(const WavePacketGrid& psi, double ell) {
  return translation_expectation_detail(psi, ell).value;
}

double momentum_moment(const WavePacketGrid& psi, int n) {
  if (n < 1) fail("InvalidArgument", "moment order must be >= 1");
  if (n > 6) fail("MomentTooHigh", "moment order capped at 6 (noise grows as k^n)");
  check_grid(psi);

  const auto G = psi.samples.size();
  std::vector<Complex> work = psi.samples;
  fft_in_place(work, FFTW_FORWARD);

  // signed frequency ladder; the Nyquist bin counts as -G/2
  const double kstep = 2.0 * std::numbers::pi / psi.length;
  for (std::size_t j = 0; j < G; ++j) {
    long long idx = static_cast<long long>(j) < static_cast<long long>(G) / 2
                        ? static_cast<long long>(j)
                        : static_cast<long long>(j) - static_cast<long long>(G);
    work[j] *= std::pow(kstep * static_cast<double>(idx), n);
  }
  fft_in_place(work, FFTW_BACKWARD);

  const double dx = psi.dx();
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < G; ++j)
    acc += std::conj(psi.samples[j]) * work[j];
  acc *= dx / static_cast<double>(G);  // undo FFTW's unnormalized round trip

  if (std::abs(acc.imag()) >= 1e-8)
    fail("ToleranceExceeded", "momentum moment came out non-real (imag " +
                                  std::to_string(acc.imag()) + ")");
  return acc.real();
}

ModularExchangeReport modular_exchange_report(const WavePacketGrid& psi0,
                                              double alpha, int nmax) {
  if (!psi0.two_packet)
    fail("InvalidArgument", "exchange report needs a two-packet state");
  if (nmax < 1) fail("InvalidArgument", "nmax must be >= 1");
  if (nmax > 6) fail("MomentTooHigh", "moment order capped at 6");
  check_grid(psi0);

  // The kick multiplies the displaced packet -- the whole term f(x - sep),
  // tails included -- by e^{i alpha}, so the kicked state is the two-packet
  // construction with the combined relative phase.  (A region mask would cut
  // through the ~1e-7 tail amplitude between the humps and the jump's k^-1
  // spectrum, amplified by k^4, breaks moment invariance near the grid's
  // Nyquist frequency.)
  WavePacketGrid kicked =
      make_two_packet(psi0.sigma, psi0.center, psi0.sep, psi0.alpha + alpha,
                      psi0.samples.size(), psi0.length);

  ModularExchangeReport report;
  report.alpha = alpha;
  report.before = translation_expectation(psi0, psi0.sep);
  report.after = translation_expectation(kicked, psi0.sep);
  report.delta_translation = report.after - report.before;
  report.delta_moment.reserve(static_cast<std::size_t>(nmax));
  for (int n = 1; n <= nmax; ++n)
    report.delta_moment.push_back(momentum_moment(kicked, n) -
                                  momentum_moment(psi0, n));
  return report;
}

}  // namespace lawless
