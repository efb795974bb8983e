#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace psw {

using complexd = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Exact binomial coefficient as double (n up to ~60 stays exact in double).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

/// Generalized Laguerre polynomial L_n^{(m)}(x) by the three-term recurrence
/// in degree. Stable for the degrees used here (n up to a few tens).
inline double laguerre(int n, int m, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + m - x;
  for (int k = 1; k < n; ++k) {
    double next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// A real number kept as mantissa * exp(log_scale), for products of
/// quasiprobability values whose exponential factors underflow plain doubles.
struct ScaledReal {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const { return mantissa * std::exp(log_scale); }

  ScaledReal operator*(const ScaledReal& o) const {
    return {mantissa * o.mantissa, log_scale + o.log_scale};
  }
};

/// Sign of x - y where both operands carry log scales.
inline double scaled_difference_sign(const ScaledReal& x, const ScaledReal& y) {
  double sx = (x.mantissa > 0.0) - (x.mantissa < 0.0);
  double sy = (y.mantissa > 0.0) - (y.mantissa < 0.0);
  if (sx != sy) return sx != 0.0 ? sx : -sy;
  if (sx == 0.0) return 0.0;
  // Same nonzero sign: compare magnitudes in log space.
  double lx = std::log(std::abs(x.mantissa)) + x.log_scale;
  double ly = std::log(std::abs(y.mantissa)) + y.log_scale;
  if (lx == ly) return 0.0;
  return (lx > ly) ? sx : -sx;
}

/// splitmix64; the counter-based uniform below derives every variate from
/// (seed, index) only, so streams are identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from (seed, index).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  return double(hash_combine(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace psw
