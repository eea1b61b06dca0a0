#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace srlab {

using cplx = std::complex<double>;

// A point of the domain: d torus angles in [0, 2pi), or a single interval
// coordinate in [-1, 1].
using Point = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

struct param_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream: mt19937_64 engine, hand-rolled transforms so results
// do not depend on libstdc++ distribution internals. fork() derives an
// independent stream; safe to call from parallel loops when each instance
// forks with its own tag.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return eng_(); }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw param_error("Rng::below: n must be positive");
    // rejection keeps the draw unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  double normal() {
    // Box-Muller, cosine branch only (keeps the stream layout simple)
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  cplx unit_phase() {
    const double t = two_pi * uniform01();
    return {std::cos(t), std::sin(t)};
  }

  double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

  Rng fork(std::uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag))); }

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_;
};

}  // namespace srlab
