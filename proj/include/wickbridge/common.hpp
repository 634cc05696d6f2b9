#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wickbridge {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Evenly spaced grid of n points including both endpoints (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Pairwise (cascade) summation. Reductions built on this are reproducible to
// ~1e-15 independent of how callers shard or reorder whole blocks of work.
template <typename T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <typename T>
T pairwise_sum(std::span<const T> v) {
  return pairwise_sum(v.data(), v.size());
}

// Composite trapezoid rule on a uniform grid.
template <typename T>
T trapezoid(std::span<const T> f, double dx) {
  if (f.size() < 2) return T{};
  T s = pairwise_sum(f.data() + 1, f.size() - 2);
  s += 0.5 * (f.front() + f.back());
  return s * dx;
}

// Cumulative trapezoid integral; out[0] = 0.
std::vector<double> cum_trapezoid(std::span<const double> f, double dx);

// ---------------------------------------------------------------------------
// Counter-based random numbers. Every variate is a pure function of
// (seed, index triple), so parallel generation is deterministic regardless of
// worker count and no generator state is shared between threads.

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = mix64(seed ^ 0x7F4A7C15C2B2AE35ull);
  h = mix64(h ^ (a * 0xD1342543DE82EF95ull));
  h = mix64(h ^ (b * 0xA0761D6478BD642Full));
  return mix64(h ^ (c * 0xE7037ED1A0B428DBull));
}

// Uniform in the open interval (0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) {
  return (static_cast<double>(counter_u64(seed, a, b, c) >> 11) + 0.5) *
         0x1.0p-53;
}

// Standard normal via Box-Muller on two counter-derived uniforms.
inline double counter_normal(std::uint64_t seed, std::uint64_t path,
                             std::uint64_t step) {
  const double u1 = counter_uniform(seed, path, step, 0);
  const double u2 = counter_uniform(seed, path, step, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

inline double uniform_in(std::uint64_t seed, std::uint64_t i,
                         std::uint64_t slot, double lo, double hi) {
  return lo + (hi - lo) * counter_uniform(seed, i, slot, 2);
}

// Worker cap: WICKBRIDGE_THREADS env var; 0 or unset means hardware default.
unsigned max_threads();

// Shortest fixed-significant-digit decimal form, used for byte-stable tables.
std::string format_double(double v, int precision);

}  // namespace wickbridge
