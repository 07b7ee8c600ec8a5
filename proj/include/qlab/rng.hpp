#pragma once

#include <cstdint>
#include <random>

namespace qlab {

/// splitmix64 step; used only to spread seed entropy.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream addressed by (root seed, stream id).
/// Distinct ids give statistically independent streams, so every sampling
/// task can derive its own stream from the one user-facing seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t root_seed, std::uint64_t stream_id = 0) {
    std::uint64_t s = root_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b << 1) ^ stream_id);
  }

  std::mt19937_64& engine() { return engine_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double gaussian() { return normal_(engine_); }

  std::uint64_t uniform_index(std::uint64_t n) {  // in [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qlab
