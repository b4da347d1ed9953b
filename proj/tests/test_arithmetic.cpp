#include "gridbalance/bignum.hpp"
#include "gridbalance/quadratic.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include <random>

namespace gb = gridbalance;
using gb::BigRational;
using gb::Quadratic;
using Float50 = boost::multiprecision::cpp_dec_float_50;

namespace {

Float50 approx(const Quadratic& x) {
  Float50 p = Float50(gb::numerator_of(x.rational_part())) / Float50(gb::denominator_of(x.rational_part()));
  Float50 q = Float50(gb::numerator_of(x.sqrt3_part())) / Float50(gb::denominator_of(x.sqrt3_part()));
  return p + q * boost::multiprecision::sqrt(Float50(3));
}

BigRational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-400, 400);
  std::uniform_int_distribution<int> den(1, 60);
  return BigRational(num(rng), den(rng));
}

}  // namespace

TEST(Decimal, RoundsHalfToEven) {
  EXPECT_EQ(gb::to_decimal(BigRational(1, 8), 2), "0.12");
  EXPECT_EQ(gb::to_decimal(BigRational(3, 8), 2), "0.38");
  EXPECT_EQ(gb::to_decimal(BigRational(1, 2), 0), "0");
  EXPECT_EQ(gb::to_decimal(BigRational(3, 2), 0), "2");
  EXPECT_EQ(gb::to_decimal(BigRational(-1, 8), 2), "-0.12");
  EXPECT_EQ(gb::to_decimal(BigRational(1, 3), 6), "0.333333");
  EXPECT_EQ(gb::to_decimal(BigRational(2, 3), 6), "0.666667");
  EXPECT_EQ(gb::to_decimal(BigRational(1), 6), "1.000000");
  EXPECT_EQ(gb::to_decimal(BigRational(1, 2000000), 6), "0.000000");  // tie, 0 is even
  EXPECT_EQ(gb::to_decimal(BigRational(3, 2000000), 6), "0.000002");
}

TEST(Decimal, FractionString) {
  EXPECT_EQ(gb::to_fraction_string(BigRational(6, 10)), "3/5");
  EXPECT_EQ(gb::to_fraction_string(BigRational(4, 4)), "1");
}

TEST(Quadratic, FieldOperations) {
  const Quadratic r(2, 1);
  EXPECT_EQ(r * r.conjugate(), Quadratic(1));
  EXPECT_EQ(r * r, Quadratic(7, 4));
  EXPECT_EQ(Quadratic(1) / r, Quadratic(2, -1));
  EXPECT_EQ(Quadratic::sqrt3() * Quadratic::sqrt3(), Quadratic(3));
  EXPECT_EQ(r.pow(0), Quadratic(1));
  EXPECT_EQ(r.pow(3), r * r * r);
  EXPECT_THROW(Quadratic(1) / Quadratic(0), std::domain_error);
}

TEST(Quadratic, SignOfMixedComponents) {
  EXPECT_EQ(Quadratic(2, -1).sign(), 1);   // 2 - 1.732
  EXPECT_EQ(Quadratic(-2, 1).sign(), -1);
  EXPECT_EQ(Quadratic(1, -1).sign(), -1);  // 1 - 1.732
  EXPECT_EQ(Quadratic(-6, 4).sign(), 1);   // 4 sqrt3 - 6 = 0.928
  EXPECT_EQ(Quadratic(0).sign(), 0);
}

TEST(Quadratic, DecimalExpansion) {
  EXPECT_EQ(Quadratic::sqrt3().to_decimal(12), "1.732050807569");
  EXPECT_EQ(Quadratic(0, -1).to_decimal(3), "-1.732");
  EXPECT_EQ(Quadratic(BigRational(1, 8)).to_decimal(2), "0.12");
}

// Property: exact sign, floor and ordering agree with a 50-digit evaluation.
TEST(Quadratic, AgreesWithHighPrecisionEvaluation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    Quadratic a(random_rational(rng), random_rational(rng));
    Quadratic b(random_rational(rng), random_rational(rng));
    Float50 fa = approx(a);
    Float50 fb = approx(b);
    ASSERT_EQ(a.sign(), fa > 0 ? 1 : (fa < 0 ? -1 : 0)) << a.to_string();
    ASSERT_EQ(a < b, fa < fb);
    ASSERT_EQ(a.floor(), gb::BigInteger(boost::multiprecision::floor(fa).convert_to<long long>())) << a.to_string();
    if (b.sign() != 0) {
      Quadratic quotient = a / b;
      ASSERT_EQ(quotient * b, a);
    }
  }
}
