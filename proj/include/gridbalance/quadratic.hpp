#pragma once

#include "gridbalance/bignum.hpp"

#include <stdexcept>
#include <string>

namespace gridbalance {

/// Exact element p + q*sqrt(3) of the quadratic field Q[sqrt(3)].
///
/// All operations are exact. Ordering is decided by rational comparisons
/// only, so the limit constants can be compared and expanded to any number
/// of decimals without floating point.
class Quadratic {
 public:
  Quadratic() = default;
  Quadratic(BigRational rational_part, BigRational sqrt3_part = 0)
      : p_(std::move(rational_part)), q_(std::move(sqrt3_part)) {}
  Quadratic(int value) : p_(value) {}  // NOLINT(google-explicit-constructor)

  static Quadratic sqrt3() { return Quadratic(0, 1); }

  const BigRational& rational_part() const { return p_; }
  const BigRational& sqrt3_part() const { return q_; }
  bool is_rational() const { return q_ == 0; }

  Quadratic conjugate() const { return Quadratic(p_, -q_); }

  /// Field norm p^2 - 3q^2; zero only for the zero element.
  BigRational norm() const { return p_ * p_ - 3 * q_ * q_; }

  Quadratic operator-() const { return Quadratic(-p_, -q_); }

  Quadratic& operator+=(const Quadratic& rhs) {
    p_ += rhs.p_;
    q_ += rhs.q_;
    return *this;
  }
  Quadratic& operator-=(const Quadratic& rhs) {
    p_ -= rhs.p_;
    q_ -= rhs.q_;
    return *this;
  }
  Quadratic& operator*=(const Quadratic& rhs) {
    BigRational p = p_ * rhs.p_ + 3 * q_ * rhs.q_;
    BigRational q = p_ * rhs.q_ + rhs.p_ * q_;
    p_ = std::move(p);
    q_ = std::move(q);
    return *this;
  }
  Quadratic& operator/=(const Quadratic& rhs) {
    BigRational n = rhs.norm();
    if (n == 0) throw std::domain_error("Quadratic: division by zero");
    *this *= rhs.conjugate();
    p_ /= n;
    q_ /= n;
    return *this;
  }

  friend Quadratic operator+(Quadratic lhs, const Quadratic& rhs) { return lhs += rhs; }
  friend Quadratic operator-(Quadratic lhs, const Quadratic& rhs) { return lhs -= rhs; }
  friend Quadratic operator*(Quadratic lhs, const Quadratic& rhs) { return lhs *= rhs; }
  friend Quadratic operator/(Quadratic lhs, const Quadratic& rhs) { return lhs /= rhs; }

  friend bool operator==(const Quadratic& a, const Quadratic& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }

  /// -1, 0 or +1.
  int sign() const {
    int sp = p_.sign();
    int sq = q_.sign();
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // Opposite signs: the larger magnitude wins. |p| vs |q|sqrt3 <=> p^2 vs 3q^2.
    BigRational pp = p_ * p_;
    BigRational qq = 3 * q_ * q_;
    return pp > qq ? sp : sq;  // equality would make sqrt(3) rational
  }

  friend int compare(const Quadratic& a, const Quadratic& b) { return (a - b).sign(); }
  friend bool operator<(const Quadratic& a, const Quadratic& b) { return compare(a, b) < 0; }
  friend bool operator>(const Quadratic& a, const Quadratic& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Quadratic& a, const Quadratic& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Quadratic& a, const Quadratic& b) { return compare(a, b) >= 0; }

  Quadratic abs() const { return sign() < 0 ? -*this : *this; }

  Quadratic pow(unsigned exponent) const {
    Quadratic result = 1;
    Quadratic base = *this;
    while (exponent > 0) {
      if (exponent & 1u) result *= base;
      exponent >>= 1u;
      if (exponent > 0) base *= base;
    }
    return result;
  }

  /// Exact floor.
  BigInteger floor() const {
    if (q_ == 0) return floor_of(p_);
    // |q|sqrt3 = sqrt(3 a^2) / b, and floor(sqrt(X)/b) = floor(isqrt(X)/b).
    BigInteger a = numerator_of(q_);
    BigInteger b = denominator_of(q_);
    if (a < 0) a = -a;
    BigInteger k = boost::multiprecision::sqrt(BigInteger(3 * a * a)) / b;
    // Integer L with L <= q*sqrt3 < L + 1 (the irrational part never lands on an integer).
    BigInteger lower = q_ > 0 ? k : BigInteger(-k - 1);
    BigInteger candidate = floor_of(p_ + BigRational(lower)) + 1;
    return *this >= Quadratic(BigRational(candidate)) ? candidate : BigInteger(candidate - 1);
  }

  /// Fixed-point decimal with `places` digits, ties to even.
  std::string to_decimal(int places) const {
    if (places < 0) throw std::invalid_argument("Quadratic::to_decimal: negative places");
    Quadratic scaled = *this * Quadratic(BigRational(pow10(static_cast<unsigned>(places))));
    BigInteger lower = scaled.floor();
    Quadratic frac = scaled - Quadratic(BigRational(lower));
    int c = compare(frac, Quadratic(BigRational(1, 2)));
    if (c > 0 || (c == 0 && lower % 2 != 0)) lower += 1;
    return format_scaled(lower, places);
  }

  double to_double() const {
    return p_.convert_to<double>() + q_.convert_to<double>() * 1.7320508075688772;
  }

  /// "p + q*sqrt(3)" with reduced fractions.
  std::string to_string() const {
    std::string out = to_fraction_string(p_);
    if (q_ != 0) {
      out += q_ > 0 ? " + " : " - ";
      out += to_fraction_string(q_ > 0 ? q_ : BigRational(-q_));
      out += "*sqrt(3)";
    }
    return out;
  }

 private:
  BigRational p_;
  BigRational q_;
};

}  // namespace gridbalance
