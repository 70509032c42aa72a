#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace subconn {

/**
 * Exact rational with 64-bit numerator/denominator, used for the expansion
 * and balance thresholds (eps, phi). All comparisons cross-multiply in
 * 128-bit arithmetic so threshold checks like |S| <= phi * |L cap U| are
 * exact; no floating point is involved in any branch decision.
 */
struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0, fraction always reduced

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rational integer(long long v) { return Rational(v, 1); }

  // ceil(1/this); requires a positive value. Used for flow capacities ceil(1/phi).
  long long ceil_inverse() const {
    if (num <= 0) throw std::invalid_argument("Rational: ceil_inverse of non-positive");
    return (den + num - 1) / num;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    // reduce cross factors first to keep operands small
    long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    return Rational((a.num / g1) * (b.num / g2), (a.den / g2) * (b.den / g1));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
    return a * Rational(b.den, b.num);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }

  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

// lhs <= r * rhs, evaluated exactly (lhs * r.den <= r.num * rhs).
inline bool leq_scaled(long long lhs, const Rational& r, long long rhs) {
  return static_cast<__int128>(lhs) * r.den <= static_cast<__int128>(r.num) * rhs;
}

// lhs >= r * rhs, evaluated exactly.
inline bool geq_scaled(long long lhs, const Rational& r, long long rhs) {
  return static_cast<__int128>(lhs) * r.den >= static_cast<__int128>(r.num) * rhs;
}

}  // namespace subconn
