#pragma once

#include <cmath>
#include <cstdint>

// Counter-based pseudo-random generator (SplitMix64). Every source of
// randomness in a run -- initial samples, per-step scalars, Lanczos starts,
// rounding -- is a child stream of one seed, so runs are bit-reproducible
// across platforms. std::normal_distribution is not portable between standard
// library implementations, hence the hand-rolled Box-Muller transform.

namespace gsfw {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

  // Independent child stream. Deterministic in (parent seed, tag); does not
  // advance the parent.
  Rng child(std::uint64_t tag) const {
    std::uint64_t z = state_ ^ (0xD1B54A32D192ED03ULL * (tag + 0x632BE59BD9B4E019ULL));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

  // State round-trip for checkpointing.
  struct State {
    std::uint64_t state;
    double cache;
    bool has_cache;
  };
  State save() const { return {state_, cache_, has_cache_}; }
  static Rng restore(const State& s) {
    Rng r(s.state);
    r.cache_ = s.cache;
    r.has_cache_ = s.has_cache;
    return r;
  }

 private:
  std::uint64_t state_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace gsfw
