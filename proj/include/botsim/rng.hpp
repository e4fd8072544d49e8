#pragma once

#include <cstdint>
#include <cmath>

namespace botsim {

// Deterministic per-stream generator (xoshiro256**). Streams are derived
// from a master seed via splitmix64 so every bot gets an independent,
// reproducible sequence regardless of event interleaving.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n). Unbiased enough for simulation purposes.
  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  // Uniform in [lo, hi] inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return p > 0.0 && uniform() < p; }

  // Exponential with the given mean.
  double exponential(double mean) {
    return -mean * std::log(1.0 - uniform());
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Stable sub-stream seed for entity `id` under master seed `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t sm = seed ^ (0xd1b54a32d192ed03ULL * (id + 1));
  return splitmix64(sm);
}

}  // namespace botsim
