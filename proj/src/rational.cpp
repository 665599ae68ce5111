#include "profiler/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace profiler {
namespace {

using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational reduce(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

Wide pow10(int places) {
  Wide p = 1;
  for (int i = 0; i < places; ++i) p *= 10;
  return p;
}

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Wide n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational operator+(const Rational& a, const Rational& b) {
  return reduce(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return reduce(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return reduce(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return reduce(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return Wide(a.num_) * b.den_ <=> Wide(b.num_) * a.den_;
}

Rational Rational::round_half_up(int places) const {
  const Wide scale = pow10(places);
  const Wide scaled = Wide(num_) * scale;
  const bool negative = scaled < 0;
  const Wide magnitude = negative ? -scaled : scaled;
  // floor((2*|x| + den) / (2*den)) rounds |x| half-up.
  Wide rounded = (2 * magnitude + den_) / (2 * Wide(den_));
  if (negative) rounded = -rounded;
  return reduce(rounded, scale);
}

std::string Rational::to_fixed(int places) const {
  const Rational r = round_half_up(places);
  const Wide scale = pow10(places);
  Wide units = Wide(r.num_) * (scale / r.den_);
  std::string sign;
  if (units < 0) {
    sign = "-";
    units = -units;
  }
  const auto whole = static_cast<std::int64_t>(units / scale);
  std::string out = sign + std::to_string(whole);
  if (places > 0) {
    std::string frac = std::to_string(static_cast<std::int64_t>(units % scale));
    out += '.';
    out.append(static_cast<std::size_t>(places) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::string Rational::to_exact_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  const auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  if (frac_part.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
  std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
  std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, text);
  const Wide scale = pow10(static_cast<int>(frac_part.size()));
  Wide num = Wide(whole) * scale + frac;
  return reduce(negative ? -num : num, scale);
}

Rational Rational::parse_exact(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  std::string_view num = text.substr(0, slash);
  if (!num.empty() && num.front() == '+') num.remove_prefix(1);
  return Rational(parse_int(num, text), parse_int(text.substr(slash + 1), text));
}

}  // namespace profiler
