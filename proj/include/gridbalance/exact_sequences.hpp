#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/errors.hpp"
#include "gridbalance/quadratic.hpp"

#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridbalance {

enum class Parity { odd, even };

inline Parity parity_of(int n) { return n % 2 == 0 ? Parity::even : Parity::odd; }

namespace detail {

struct TreeCountMemo {
  std::mutex mutex;
  std::vector<BigUnsigned> values{1, 1, 4};
};

inline TreeCountMemo& tree_count_memo() {
  static TreeCountMemo memo;
  return memo;
}

}  // namespace detail

/// Number of spanning trees T_n of the 2-by-n ladder, with T_0 = 1.
/// T_{n+2} = 4 T_{n+1} - T_n from T_1 = 1, T_2 = 4. Memoized; thread-safe.
inline BigUnsigned tree_count(int n) {
  if (n < 0) throw std::invalid_argument("tree_count: n must be nonnegative");
  auto& memo = detail::tree_count_memo();
  std::lock_guard<std::mutex> lock(memo.mutex);
  auto& v = memo.values;
  while (static_cast<int>(v.size()) <= n) {
    std::size_t k = v.size();
    v.push_back(4 * v[k - 1] - v[k - 2]);
  }
  return v[static_cast<std::size_t>(n)];
}

/// r = 2 + sqrt(3), the dominant root of the tree-count recurrence.
inline Quadratic ladder_root() { return Quadratic(2, 1); }

/// a = 1 / (2 sqrt(3)) = sqrt(3) / 6.
inline Quadratic ladder_scale() { return Quadratic(0, BigRational(1, 6)); }

/// T_n evaluated as a (r^n - r^-n) in Q[sqrt(3)].
inline BigUnsigned tree_count_closed(int n) {
  if (n < 1) throw std::invalid_argument("tree_count_closed: n must be positive");
  auto k = static_cast<unsigned>(n);
  Quadratic r = ladder_root();
  Quadratic value = ladder_scale() * (r.pow(k) - r.conjugate().pow(k));
  if (!value.is_rational() || denominator_of(value.rational_part()) != 1) {
    throw ComputationError("tree_count_closed: closed form is not an integer at n = " + std::to_string(n) +
                           ": " + value.to_string());
  }
  return numerator_of(value.rational_part());
}

/// First k coefficients of num(x)/den(x) as a power series. den[0] must be +-1.
inline std::vector<BigInteger> series_divide(const std::vector<BigInteger>& num, const std::vector<BigInteger>& den,
                                             std::size_t k) {
  if (den.empty() || (den[0] != 1 && den[0] != -1)) {
    throw std::invalid_argument("series_divide: constant term of the denominator must be a unit");
  }
  std::vector<BigInteger> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    BigInteger acc = j < num.size() ? num[j] : BigInteger(0);
    for (std::size_t i = 1; i < den.size() && i <= j; ++i) acc -= den[i] * out[j - i];
    out[j] = acc * den[0];
  }
  return out;
}

/// Coefficients of x^1..x^k in x / (1 - 4x + x^2).
inline std::vector<BigUnsigned> generating_coefficients(int k) {
  if (k < 1) throw std::invalid_argument("generating_coefficients: k must be positive");
  auto series = series_divide({0, 1}, {1, -4, 1}, static_cast<std::size_t>(k) + 1);
  return {series.begin() + 1, series.end()};
}

/// One summand b * length * T_{m-i}^2 of the balanced-tree count.
struct BalancedTerm {
  int multiplier;      // 1 for reflection-symmetric cut loops, else 2
  int length;          // number of placements of the balanced cut edge
  BigUnsigned square;  // T_{m-i}^2, end-block tree pairs

  BigUnsigned value() const { return multiplier * length * square; }
};

/// Summands for i = 0..m (m = n/2) whose total is S_n. The last term is the
/// loop through the middle, with length n and square T_0^2 = 1.
inline std::vector<BalancedTerm> balanced_terms(int n) {
  if (n < 2) throw std::invalid_argument("balanced_terms: n must be at least 2");
  const int m = n / 2;
  const bool odd = n % 2 != 0;
  std::vector<BalancedTerm> terms;
  terms.reserve(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i < m; ++i) {
    BigUnsigned t = tree_count(m - i);
    int multiplier = (!odd && i == 0) ? 1 : 2;
    int length = odd ? 2 * i + 3 : 2 * i + 2;
    terms.push_back({multiplier, length, t * t});
  }
  terms.push_back({1, n, 1});
  return terms;
}

/// S_n, the number of balanced spanning trees of the 2-by-n ladder.
/// n = 1 gives 1: the lone edge splits 1|1.
inline BigUnsigned balanced_count(int n) {
  if (n < 1) throw std::invalid_argument("balanced_count: n must be positive");
  const int m = n / 2;
  BigUnsigned total = n;
  if (n % 2 != 0) {
    for (int i = 0; i < m; ++i) {
      BigUnsigned t = tree_count(m - i);
      total += (6 + 4 * i) * t * t;
    }
  } else {
    BigUnsigned tm = tree_count(m);
    total += 2 * tm * tm;
    for (int i = 1; i < m; ++i) {
      BigUnsigned t = tree_count(m - i);
      total += (4 + 4 * i) * t * t;
    }
  }
  return total;
}

/// Probability S_n / T_n that a uniform spanning tree is balanced, reduced.
inline BigRational ust_balance_probability(int n) {
  if (n < 1) throw std::invalid_argument("ust_balance_probability: n must be positive");
  return BigRational(balanced_count(n), tree_count(n));
}

/// Large-n limit of S_n / T_n along one parity:
/// odd (3 + sqrt3)/9, even (1 + 4 sqrt3)/(6 sqrt3) = 2/3 + sqrt3/18.
inline Quadratic limit_constant(Parity parity) {
  if (parity == Parity::odd) return Quadratic(BigRational(1, 3), BigRational(1, 9));
  return Quadratic(BigRational(2, 3), BigRational(1, 18));
}

/// Exact evaluation of the series identities behind the limit constants,
/// at x = r^-2 = 7 - 4 sqrt3.
struct SeriesIdentityReport {
  bool inverse_root = false;         // r * r^-1 == 1
  bool x_is_inverse_square = false;  // r^-2 == 7 - 4 sqrt3
  bool one_minus_x = false;          // 1 - x == 4 sqrt3 - 6
  bool geometric_part = false;       // 6/(1-x) == 2 sqrt3 + 3
  bool derivative_part = false;      // 4x/(1-x)^2 == 1/3
  bool odd_sum = false;              // sum == 2 sqrt3 + 10/3
  bool odd_limit = false;            // (a/r) * sum == odd constant
  bool even_limit = false;           // 2a + a (4x/(1-x) + 4x/(1-x)^2) == even constant

  bool all() const {
    return inverse_root && x_is_inverse_square && one_minus_x && geometric_part && derivative_part && odd_sum &&
           odd_limit && even_limit;
  }
};

inline SeriesIdentityReport series_identity_report() {
  SeriesIdentityReport report;
  const Quadratic r = ladder_root();
  const Quadratic a = ladder_scale();
  const Quadratic r_inv = r.conjugate();
  const Quadratic x(7, -4);
  const Quadratic sqrt3 = Quadratic::sqrt3();

  report.inverse_root = r * r_inv == 1 && Quadratic(1) / r == r_inv;
  report.x_is_inverse_square = Quadratic(1) / (r * r) == x;
  const Quadratic one_minus = Quadratic(1) - x;
  report.one_minus_x = one_minus == Quadratic(-6, 4);
  const Quadratic geometric = Quadratic(6) / one_minus;
  const Quadratic derivative = Quadratic(4) * x / (one_minus * one_minus);
  report.geometric_part = geometric == Quadratic(3, 2);
  report.derivative_part = derivative == Quadratic(BigRational(1, 3));
  const Quadratic sum = geometric + derivative;
  report.odd_sum = sum == Quadratic(2) * sqrt3 + Quadratic(BigRational(10, 3));
  report.odd_limit = a / r * sum == limit_constant(Parity::odd);
  const Quadratic even = Quadratic(2) * a + a * (Quadratic(4) * x / one_minus + derivative);
  report.even_limit = even == limit_constant(Parity::even);
  return report;
}

inline bool series_identity_check() { return series_identity_report().all(); }

/// |S_n/T_n - limit(parity of n)|, exact.
inline Quadratic limit_gap(int n) {
  return (Quadratic(ust_balance_probability(n)) - limit_constant(parity_of(n))).abs();
}

}  // namespace gridbalance
