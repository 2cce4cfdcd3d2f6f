// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foldip/numeric.hpp"

using namespace foldip;

TEST_CASE("floor and ceil division agree with the real quotient") {
  CHECK(floor_div(Int(7), Int(2)) == 3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  CHECK(floor_div(Int(7), Int(-2)) == -4);
  CHECK(floor_div(Int(-7), Int(-2)) == 3);
  CHECK(floor_div(Int(6), Int(3)) == 2);
  CHECK(floor_div(Int(-6), Int(3)) == -2);

  CHECK(ceil_div(Int(7), Int(2)) == 4);
  CHECK(ceil_div(Int(-7), Int(2)) == -3);
  CHECK(ceil_div(Int(7), Int(-2)) == -3);
  CHECK(ceil_div(Int(-7), Int(-2)) == 4);
  CHECK(ceil_div(Int(6), Int(3)) == 2);
  CHECK(ceil_div(Int(-6), Int(3)) == -2);
}

TEST_CASE("floor_div and ceil_div bracket the quotient for all small pairs") {
  for (Int a = -20; a <= 20; ++a)
    for (Int b = -5; b <= 5; ++b) {
      if (b == 0) continue;
      const Int f = floor_div(a, b);
      const Int c = ceil_div(a, b);
      // floor remainder lies in [0, b) for b > 0 and (b, 0] for b < 0
      const Int rem = a - f * b;
      if (b > 0) {
        CHECK(rem >= 0);
        CHECK(rem < b);
      } else {
        CHECK(rem <= 0);
        CHECK(rem > b);
      }
      if (a % b == 0) {
        CHECK(f == c);
      } else {
        CHECK(c == f + 1);
      }
      // agreement with the BigInt overloads
      CHECK(floor_div(BigInt(a), BigInt(b)) == f);
      CHECK(ceil_div(BigInt(a), BigInt(b)) == c);
    }
}

TEST_CASE("rational floor and ceil") {
  CHECK(floor_rational(Rational(7, 2)) == 3);
  CHECK(ceil_rational(Rational(7, 2)) == 4);
  CHECK(floor_rational(Rational(-7, 2)) == -4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
  CHECK(floor_rational(Rational(5)) == 5);
  CHECK(ceil_rational(Rational(5)) == 5);
  CHECK(floor_rational(Rational(-5)) == -5);
  CHECK(ceil_rational(Rational(0)) == 0);
}

TEST_CASE("bit_length") {
  CHECK(bit_length(BigInt(0)) == 0);
  CHECK(bit_length(BigInt(1)) == 1);
  CHECK(bit_length(BigInt(2)) == 2);
  CHECK(bit_length(BigInt(3)) == 2);
  CHECK(bit_length(BigInt(4)) == 3);
  CHECK(bit_length(BigInt(-4)) == 3);
  CHECK(bit_length(BigInt(255)) == 8);
  CHECK(bit_length(BigInt(256)) == 9);
  CHECK(bit_length(big_pow(BigInt(2), 100)) == 101);
}

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(BigInt(0)) == 0);
  CHECK(ceil_log2(BigInt(1)) == 0);
  CHECK(ceil_log2(BigInt(2)) == 1);
  CHECK(ceil_log2(BigInt(3)) == 2);
  CHECK(ceil_log2(BigInt(4)) == 2);
  CHECK(ceil_log2(BigInt(5)) == 3);
  CHECK(ceil_log2(BigInt(1024)) == 10);
  CHECK(ceil_log2(BigInt(1025)) == 11);
}

TEST_CASE("big_pow") {
  CHECK(big_pow(BigInt(3), 0) == 1);
  CHECK(big_pow(BigInt(3), 4) == 81);
  CHECK(big_pow(BigInt(10), 20) == BigInt("100000000000000000000"));
  CHECK(big_pow(BigInt(-2), 3) == -8);
}

TEST_CASE("fits_int64 and to_int64") {
  const BigInt max = std::numeric_limits<Int>::max();
  const BigInt min = std::numeric_limits<Int>::min();
  CHECK(fits_int64(max));
  CHECK(fits_int64(min));
  CHECK(!fits_int64(max + 1));
  CHECK(!fits_int64(min - 1));
  CHECK(to_int64(BigInt(-12345)) == -12345);
}

TEST_CASE("decimal strings") {
  CHECK(to_string(BigInt(-42)) == "-42");
  CHECK(to_string(Rational(1, 3)) == "1/3");
  CHECK(to_string(Rational(4, 2)) == "2");
}
