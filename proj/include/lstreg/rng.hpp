#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace lstreg {

/// Mixes several 64-bit words into one seed (splitmix64 finalizer rounds).
/// Used to derive independent, order-insensitive streams per (seed, replication,
/// stream-id) triple so parallel replications stay reproducible.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  auto split = [](std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t state = a;
  std::uint64_t out = split(state);
  state ^= b + 0x632be59bd9b4e019ULL;
  out ^= split(state);
  state ^= c + 0x9e6c63d0876a9a47ULL;
  out ^= split(state);
  return out;
}

/// Deterministic random source. All distributions are generated from explicit
/// arithmetic on the raw engine output, never from std:: distribution objects,
/// so identical seeds give identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0)
      : engine_(mix_seed(seed, stream_a, stream_b)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, n), n >= 1. Unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// m distinct indices from {0, ..., n-1}, in draw order (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int n, int m) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(m);
    for (int t = 0; t < m; ++t) {
      const int j = t + static_cast<int>(uniform_below(static_cast<std::uint64_t>(n - t)));
      std::swap(pool[t], pool[j]);
      out.push_back(pool[t]);
    }
    return out;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lstreg
