// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

namespace foldip {

using Int = std::int64_t;
using Index = Eigen::Index;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

// Multiprecision scalars are used for storage and element-wise arithmetic
// only.  Eigen expression products do not instantiate cleanly for these
// scalar types with the Boost version we build against, so code touching
// the matrices below sticks to explicit loops.
using BigVector = Eigen::Matrix<BigInt, Eigen::Dynamic, 1>;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

// Entries of instances are capped well below the int64 range so that sums
// and differences of a few entries never overflow before we switch to
// arbitrary precision.
inline constexpr Int kMaxEntryMagnitude = Int(1) << 62;

// Floor/ceil division that is exact for negative operands, unlike C++'s
// truncating operator/.
inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(Int a, Int b) {
  Int q = a / b;
  Int r = a % b;
  if (r != 0 && ((r < 0) == (b < 0))) ++q;
  return q;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a % b;
  if (r != 0 && ((r < 0) == (b < 0))) ++q;
  return q;
}

inline BigInt floor_rational(const Rational& x) {
  return floor_div(numerator(x), denominator(x));
}

inline BigInt ceil_rational(const Rational& x) {
  return ceil_div(numerator(x), denominator(x));
}

// Number of bits in |x|; 0 for x == 0.
inline unsigned bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(x))) + 1;
}

// Smallest k with 2^k >= x (x >= 1); 0 for x <= 1.
inline unsigned ceil_log2(const BigInt& x) {
  if (x <= 1) return 0;
  BigInt y = x - 1;
  return static_cast<unsigned>(boost::multiprecision::msb(y)) + 1;
}

inline BigInt big_pow(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline bool fits_int64(const BigInt& x) {
  static const BigInt lo = std::numeric_limits<Int>::min();
  static const BigInt hi = std::numeric_limits<Int>::max();
  return x >= lo && x <= hi;
}

inline Int to_int64(const BigInt& x) {
  return static_cast<Int>(x);
}

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace foldip
