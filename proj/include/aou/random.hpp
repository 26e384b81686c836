#pragma once

// Counter-based random streams (Philox4x64-10).
//
// A stream is addressed by (seed, round, purpose, entity). Two streams with the
// same address produce bit-identical sequences on every platform; streams with
// different addresses never share state, so replications and per-entity draws
// can be evaluated in any order.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace aou {

/// Philox4x64 with 10 rounds (Salmon et al., SC'11). Maps a 256-bit counter
/// and a 128-bit key to 256 pseudo-random bits.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr int kRounds = 10;

  static Counter block(Counter ctr, Key key) {
    for (int r = 0; r < kRounds; ++r) {
      if (r > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static Counter round(const Counter& c, const Key& k) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// What a stream is used for. Part of the stream address.
enum class StreamPurpose : std::uint64_t {
  device_to_uav = 1,
  uav_to_bs = 2,
  fading = 3,
  random_feasible = 4,
  scatter = 5,
  expectation_check = 6,
  test = 99,
};

struct StreamId {
  std::uint64_t round = 0;
  StreamPurpose purpose = StreamPurpose::test;
  std::uint64_t entity = 0;
};

class RandomStream {
 public:
  using result_type = std::uint64_t;

  /// Bumped whenever the mapping from addresses to sequences changes.
  static constexpr std::uint64_t kStreamVersion = 1;

  RandomStream(std::uint64_t seed, StreamId id)
      : key_{seed, kStreamVersion},
        counter_{0, id.round, static_cast<std::uint64_t>(id.purpose), id.entity} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      ++counter_[0];
      buffer_ = Philox4x64::block(counter_, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Circularly-symmetric complex normal CN(0, 1): E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

 private:
  Philox4x64::Key key_;
  Philox4x64::Counter counter_;
  Philox4x64::Counter buffer_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace aou
