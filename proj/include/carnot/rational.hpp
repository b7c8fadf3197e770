#pragma once

#include <charconv>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "carnot/errors.hpp"

namespace carnot {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator, so equality is
/// structural. Intermediate products use 128-bit arithmetic; a result that does
/// not fit back into 64 bits raises NumericError instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p", "-p", "p/q" (whitespace around the tokens allowed).
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    auto parse_int = [&](std::string_view s) {
      s = trim(s);
      if (!s.empty() && s.front() == '+') s.remove_prefix(1);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("not a rational literal: '" + std::string(text) + "'");
      }
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    using I = __int128;
    return from_wide(I(a.num_) * b.den_ + I(b.num_) * a.den_, I(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    using I = __int128;
    return from_wide(I(a.num_) * b.num_, I(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational division by zero");
    using I = __int128;
    return from_wide(I(a.num_) * b.den_, I(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend auto operator<=>(const Rational& a, const Rational& b) {
    using I = __int128;
    const I lhs = I(a.num_) * b.den_;
    const I rhs = I(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw NumericError("rational with zero denominator");
    *this = from_wide(num, den);
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw NumericError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 lo = INT64_MIN;
    constexpr __int128 hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw NumericError("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace carnot
