#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gridbalance {

/// Arbitrary-precision integer. Used as a nonnegative count wherever the
/// name BigUnsigned appears.
using BigInteger = boost::multiprecision::cpp_int;
using BigUnsigned = boost::multiprecision::cpp_int;

/// Exact fraction, always kept in lowest terms with a positive denominator.
using BigRational = boost::multiprecision::cpp_rational;

inline BigInteger numerator_of(const BigRational& x) {
  return boost::multiprecision::numerator(x);
}

inline BigInteger denominator_of(const BigRational& x) {
  return boost::multiprecision::denominator(x);
}

inline BigInteger pow10(unsigned exponent) {
  return boost::multiprecision::pow(BigInteger(10), exponent);
}

inline BigInteger factorial(unsigned k) {
  BigInteger result = 1;
  for (unsigned i = 2; i <= k; ++i) result *= i;
  return result;
}

/// Largest integer not exceeding x.
inline BigInteger floor_of(const BigRational& x) {
  BigInteger num = numerator_of(x);
  BigInteger den = denominator_of(x);
  BigInteger q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

/// Renders an integer scaled by 10^places as a fixed-point decimal string.
inline std::string format_scaled(BigInteger scaled, int places) {
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative && scaled != 0) digits.insert(0, "-");
  return digits;
}

/// Fixed-point rendering with `places` decimals, ties rounded to even.
inline std::string to_decimal(const BigRational& x, int places) {
  if (places < 0) throw std::invalid_argument("to_decimal: negative places");
  BigRational scaled = x * BigRational(pow10(static_cast<unsigned>(places)));
  BigInteger lower = floor_of(scaled);
  BigRational frac = scaled - BigRational(lower);
  BigRational half(1, 2);
  if (frac > half || (frac == half && lower % 2 != 0)) lower += 1;
  return format_scaled(lower, places);
}

inline double to_double(const BigRational& x) {
  return x.convert_to<double>();
}

inline std::string to_fraction_string(const BigRational& x) {
  if (denominator_of(x) == 1) return numerator_of(x).str();
  return numerator_of(x).str() + "/" + denominator_of(x).str();
}

}  // namespace gridbalance
