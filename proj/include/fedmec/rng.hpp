#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fedmec {

// SplitMix64 mixer, used to derive independent substreams from one seed.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream purposes. Each (seed, tag, index) triple owns a disjoint stream, so
// adding devices or schemes never perturbs the draws seen by existing ones.
enum StreamTag : std::uint64_t {
  kTagEnvState = 0x45531,   // arrivals, mobility, fading, task draws
  kTagEnvTransmit = 0x45532,  // per-attempt fading and decode errors
  kTagPolicy = 0x504f1,     // epsilon-greedy and replay sampling
  kTagInit = 0x494e1,       // network weight initialization
};

// Deterministic random stream. Distribution conversions are hand-rolled so
// the sequence depends only on the mt19937_64 output, never on the standard
// library's distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream derive(std::uint64_t root, std::uint64_t tag) {
    return RngStream(splitmix64(splitmix64(root) ^ tag));
  }
  static RngStream derive(std::uint64_t root, std::uint64_t tag, std::uint64_t sub) {
    return RngStream(splitmix64(splitmix64(splitmix64(root) ^ tag) ^ sub));
  }

  std::uint64_t raw() { return gen_(); }

  // [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [0, n), n > 0
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(raw()) * n) >> 64);
  }

  // exponential with mean 1
  double exponential() { return -std::log1p(-uniform01()); }

  // standard normal; Box-Muller, pair cached so two consecutive calls
  // consume exactly two uniforms
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fedmec
