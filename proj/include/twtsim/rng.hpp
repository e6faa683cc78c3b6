#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace twtsim {

// SplitMix64 step. Used both for seeding engines and as a stateless
// counter-based generator (hash a tuple of keys, get an i.i.d. draw).
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ (0x9E3779B97F4A7C15ULL + b + (a << 6) + (a >> 2)));
}

inline constexpr double u64_to_unit(std::uint64_t x) noexcept {
  // 53-bit mantissa, value in [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Seeded sequential random stream. All distributions are implemented on
/// top of raw 64-bit draws so sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform01() { return u64_to_unit(next_u64()); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

  // Inverse-CDF Weibull sample with the usual (shape k, scale lambda).
  double weibull(double shape, double scale) {
    double u = uniform01();
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    return scale * std::pow(-std::log1p(-u), 1.0 / shape);
  }

 private:
  std::mt19937_64 eng_;
};

/// Derives independent substreams from a master seed. Streams are keyed by
/// (purpose, id) so adding a station never perturbs another station's draws.
struct StreamSeeder {
  std::uint64_t master = 1;

  std::uint64_t derive(std::uint64_t purpose, std::uint64_t id = 0) const {
    return mix_keys(mix_keys(master, purpose), id);
  }
  Rng stream(std::uint64_t purpose, std::uint64_t id = 0) const {
    return Rng(derive(purpose, id));
  }
};

// Stream purpose tags.
inline constexpr std::uint64_t kStreamTraffic = 0x7452414646494331ULL;
inline constexpr std::uint64_t kStreamChannel = 0x4348414E4E454C31ULL;
inline constexpr std::uint64_t kStreamMisc = 0x4D49534331ULL;

}  // namespace twtsim
