#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace scl_lab {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: gcd(num, den) == 1 and den > 0. Intermediate products
/// are formed in 128 bits; any result that does not fit back into 64 bits
/// throws std::overflow_error rather than silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit from integers is intended
  Rational(std::int64_t n, std::int64_t d);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }

  [[nodiscard]] bool is_integer() const { return den_ == 1; }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] int sign() const { return (num_ > 0) - (num_ < 0); }
  [[nodiscard]] double to_double() const;

  /// "n" for integers, "n/d" otherwise.
  [[nodiscard]] std::string str() const;
  /// Inverse of str(); also accepts surrounding whitespace.
  static Rational parse(std::string_view text);

  [[nodiscard]] Rational abs() const;
  [[nodiscard]] std::int64_t floor() const;
  [[nodiscard]] std::int64_t ceil() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Rational extended by +infinity, used for upper bounds that may be absent.
struct ExtRational {
  bool infinite = true;
  Rational value{};

  static ExtRational inf() { return {}; }
  static ExtRational of(Rational r) { return {false, r}; }

  [[nodiscard]] std::string str() const { return infinite ? "inf" : value.str(); }
  [[nodiscard]] double to_double() const;

  friend bool operator==(const ExtRational&, const ExtRational&) = default;
};

/// a <= b with +inf as the top element.
bool le(const Rational& a, const ExtRational& b);

}  // namespace scl_lab
