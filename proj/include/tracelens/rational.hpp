#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "tracelens/error.hpp"

namespace tracelens {

using int128_t = __int128;

// Exact rational number with positive denominator, always stored reduced.
// int64 components with __int128 intermediates keep every operation used in
// this library exact; anything that would leave the representable range
// raises an Overflow error instead of saturating.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorKind::BadArgument, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    return Rational{num, den};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Cross-multiplied comparison; exact for all int64 operands.
inline bool rational_less(const Rational& a, const Rational& b) {
  return static_cast<int128_t>(a.num) * b.den < static_cast<int128_t>(b.num) * a.den;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    fail(ErrorKind::Overflow, std::string(what) + " exceeds the 64-bit range");
  return out;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    fail(ErrorKind::Overflow, std::string(what) + " exceeds the 64-bit range");
  return out;
}

// value * scale rounded to the nearest integer, ties to even. Exact: the
// product is formed in 128 bits before the division.
inline std::int64_t scale_round_half_even(std::int64_t value, const Rational& scale) {
  const bool negative = (value < 0) != (scale.num < 0);
  const auto abs128 = [](int128_t v) { return v < 0 ? -v : v; };
  const int128_t p = abs128(static_cast<int128_t>(value) * scale.num);
  const int128_t d = scale.den;  // > 0 by construction
  int128_t q = p / d;
  const int128_t r = p % d;
  if (2 * r > d || (2 * r == d && (q & 1) != 0)) ++q;
  if (negative) q = -q;
  if (q > INT64_MAX || q < INT64_MIN)
    fail(ErrorKind::Overflow, "scaled duration exceeds the 64-bit range");
  return static_cast<std::int64_t>(q);
}

}  // namespace tracelens
