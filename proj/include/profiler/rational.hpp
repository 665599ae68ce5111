#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace profiler {

/// Exact fraction num/den with den > 0 and gcd(num, den) == 1.
///
/// All rubric arithmetic (feature averages, dimension means, weighted sums)
/// stays exact so that threshold lookups never depend on binary rounding.
/// Operations throw std::overflow_error if a reduced result leaves int64.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Rounds half away from zero to `places` decimal places.
  Rational round_half_up(int places) const;

  /// Fixed-point rendering with half-up rounding, e.g. "2.13" for 17/8 at 2 places.
  std::string to_fixed(int places) const;

  /// "num/den", or "num" for integers. Lossless.
  std::string to_exact_string() const;

  /// Parses "2", "-0.5", "2.125" exactly.
  static Rational parse_decimal(std::string_view text);
  /// Parses the output of to_exact_string() or a plain decimal.
  static Rational parse_exact(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace profiler
