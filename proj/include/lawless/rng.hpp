#pragma once

#include <cmath>
#include <cstdint>

namespace lawless {

// Counter-based generator (Philox2x64, 10 rounds). Every output is a pure
// function of (seed, stream, draw index), so per-trial substreams are
// bit-reproducible regardless of evaluation order or parallel scheduling:
// stream t of a run never collides with stream t' != t, and replaying a
// stream always yields the same draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(seed), stream_(stream) {}

  std::uint64_t next_u64() {
    if (have_ == 0) {
      block(index_++, out_);
      have_ = 2;
    }
    return out_[2 - have_--];
  }

  // Uniform on [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; draws two uniforms per pair.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return spare_normal_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  void block(std::uint64_t index, std::uint64_t out[2]) const {
    std::uint64_t c0 = index, c1 = stream_, k = key_;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi, lo;
      mulhilo(0xD2B74407B1CE6E93ULL, c0, hi, lo);
      c0 = hi ^ k ^ c1;
      c1 = lo;
      k += 0x9E3779B97F4A7C15ULL;  // Weyl increment (golden ratio)
    }
    out[0] = c0;
    out[1] = c1;
  }

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t index_ = 0;
  std::uint64_t out_[2] = {0, 0};
  int have_ = 0;
  double spare_normal_ = 0.0;
  bool have_normal_ = false;
};

}  // namespace lawless
