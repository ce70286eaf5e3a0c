// Copyright 2026 The diophlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact rational arithmetic on top of GMP.
//
// Every value is kept in canonical form: denominator > 0 and
// gcd(|numerator|, denominator) = 1. Zero is 0/1.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diophlab {

using BigInt = mpz_class;

inline BigInt big_from_u128(unsigned __int128 v) {
  BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
  BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
  return (hi << 64) + lo;
}

inline BigInt pow_big(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I n) : value_(static_cast<long>(n)) {}  // NOLINT(implicit)

  template <std::unsigned_integral I>
  Rational(I n) : value_(static_cast<unsigned long>(n)) {}  // NOLINT(implicit)

  Rational(const BigInt& n) : value_(n) {}  // NOLINT(implicit)

  Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "n" or "n/d" (optional leading sign on n, decimal digits only).
  static Rational parse(std::string_view text) {
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (s.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
      return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    std::string n(num);
    if (n[0] == '+') n.erase(0, 1);
    BigInt d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(BigInt(n, 10), d);
  }

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  BigInt floor() const {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return r;
  }
  BigInt ceil() const {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return r;
  }
  /// Fractional part in [0, 1).
  Rational frac() const { return *this - Rational(floor()); }

  double to_double() const { return value_.get_d(); }

  /// Exact "num/den" form, always with a slash.
  std::string to_string() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

  /// Decimal rendering correctly rounded (half-even) to `digits` significant
  /// digits, in the style of printf("%.*g").
  std::string to_decimal(int digits = 12) const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.value_.get_mpq_t(), b.value_.get_mpq_t()) != 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base.is_zero()) throw std::domain_error("zero to a negative power");
    return Rational(1) / pow(base, -exponent);
  }
  const auto e = static_cast<unsigned long>(exponent);
  return Rational(pow_big(base.numerator(), e), pow_big(base.denominator(), e));
}

/// Distance to the nearest integer, ||x||.
inline Rational nearest_int_distance(const Rational& x) {
  Rational f = x.frac();
  Rational g = Rational(1) - f;
  return f < g ? f : g;
}

inline std::string Rational::to_decimal(int digits) const {
  if (digits < 1) digits = 1;
  if (is_zero()) return "0";
  const Rational a = abs(*this);
  const BigInt& num = a.value_.get_num();
  const BigInt& den = a.value_.get_den();
  // Exponent estimate from bit lengths, then corrected exactly.
  long e = static_cast<long>(std::floor((static_cast<double>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                                         static_cast<double>(mpz_sizeinbase(den.get_mpz_t(), 2))) *
                                        0.30102999566398120));
  auto pow10 = [](long k) {
    return k >= 0 ? Rational(pow_big(BigInt(10), static_cast<unsigned long>(k)))
                  : Rational(BigInt(1), pow_big(BigInt(10), static_cast<unsigned long>(-k)));
  };
  while (pow10(e) > a) --e;
  while (pow10(e + 1) <= a) ++e;

  const Rational scaled = a * pow10(digits - 1 - e);
  BigInt n = scaled.floor();
  const Rational rem = scaled - Rational(n);
  const Rational half(BigInt(1), BigInt(2));
  if (rem > half || (rem == half && mpz_odd_p(n.get_mpz_t()))) n += 1;
  if (n == pow_big(BigInt(10), static_cast<unsigned long>(digits))) {
    n /= 10;
    ++e;
  }
  std::string s = n.get_str();
  std::string out = sign() < 0 ? "-" : "";
  auto strip = [](std::string frac) {
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    return frac;
  };
  if (e >= -4 && e < digits) {
    if (e >= 0) {
      const std::string int_part = s.substr(0, static_cast<std::size_t>(e) + 1);
      const std::string frac = strip(s.substr(static_cast<std::size_t>(e) + 1));
      out += int_part;
      if (!frac.empty()) out += "." + frac;
    } else {
      const std::string frac = strip(std::string(static_cast<std::size_t>(-e - 1), '0') + s);
      out += "0." + frac;
    }
  } else {
    const std::string frac = strip(s.substr(1));
    out += s.substr(0, 1);
    if (!frac.empty()) out += "." + frac;
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+03ld", e);
    out += buf;
  }
  return out;
}

/// A closed enclosure [lower, upper] of a possibly irrational quantity.
/// lower == upper means the value is known exactly.
struct Bounds {
  Rational lower;
  Rational upper;

  static Bounds point(const Rational& v) { return {v, v}; }
  bool exact() const { return lower == upper; }
  Rational width() const { return upper - lower; }
  Rational midpoint() const { return (lower + upper) / Rational(2); }
  bool contains(const Rational& v) const { return lower <= v && v <= upper; }

  friend Bounds operator+(const Bounds& a, const Bounds& b) { return {a.lower + b.lower, a.upper + b.upper}; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

}  // namespace diophlab
