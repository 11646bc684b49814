#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace camsad {

using Cplx = std::complex<double>;

// Deterministic 64-bit mixer; used to derive per-item seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform double in [lo, hi) from raw 64-bit state. Independent of any
// standard-library distribution so results are identical everywhere.
inline double uniform_double(std::uint64_t bits, double lo, double hi) {
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

// Shortest round-trip decimal form of a double.
inline std::string dtos(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string ctos(Cplx z) {
  if (z.imag() == 0.0) return dtos(z.real());
  std::string s = "(" + dtos(z.real());
  if (z.imag() >= 0.0 || z.imag() != z.imag()) s += "+";
  s += dtos(z.imag()) + "i)";
  return s;
}

// Runs fn(i) for i in [0, count). Results must be written to per-index slots;
// the reduction order is then independent of the thread count.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int nt = static_cast<int>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::atomic<std::size_t> cursor{0};
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&fn, &cursor, count] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= count) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct NonIsolatedError : std::runtime_error {
  std::string factor;
  explicit NonIsolatedError(const std::string& f)
      : std::runtime_error("singular set is not isolated; common factor: " + f), factor(f) {}
};

struct ProjectiveConditionError : std::runtime_error {
  ProjectiveConditionError() : std::runtime_error("1-form violates the projective condition") {}
};

} // namespace camsad
