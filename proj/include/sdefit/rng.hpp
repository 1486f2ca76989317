#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sdefit {

/// Deterministic, splittable random stream.
///
/// Engine: xoshiro256++ seeded through the splitmix64 finalizer. The four
/// state words are the first four outputs of a splitmix64 sequence started
/// at `mix64(seed) ^ mix64(stream_id + 1)`, so every (seed, stream_id) pair
/// owns an independent sequence and the mapping is reproducible across
/// platforms. Gaussian variates use the Marsaglia polar method with the
/// spare value cached.
///
/// A stream is single-owner: parallel consumers must each hold their own
/// stream, obtained from create() with distinct stream ids or from split().
class RngStream {
 public:
  static RngStream create(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
  }

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t c = mix64(seed) ^ mix64(stream_id + 1);
    for (auto& w : state_) {
      c += 0x9E3779B97F4A7C15ULL;
      w = mix64(c);
    }
    if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0)
      state_[0] = 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Derive an independent child stream. Consumes one draw from this
  /// stream, so parent and child never share state afterwards.
  RngStream split(std::uint64_t child_id) { return RngStream(next_u64(), child_id); }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("uniform: lo > hi");
    if (lo == hi) return lo;
    return lo + next_double() * (hi - lo);
  }

  /// Gaussian variate, Marsaglia polar method. sigma == 0 returns mu
  /// without consuming randomness.
  double normal(double mu, double sigma) {
    if (sigma < 0) throw std::invalid_argument("normal: sigma < 0");
    if (sigma == 0) return mu;
    return mu + sigma * standard_normal();
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  // splitmix64 finalizer
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sdefit
