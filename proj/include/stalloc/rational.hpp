// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace stalloc {

using BigInt = boost::multiprecision::cpp_int;
// Kept in lowest terms with positive denominator by the backend.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative argument");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// C(n, k); zero outside 0 <= k <= n, so vanishing tail terms come out
/// automatically in the closed forms built on it.
inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

inline std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Decimal rendering with a fixed number of significant digits, computed in
/// integer arithmetic so the string is identical on every platform.
inline std::string to_decimal_string(const Rational& r, int sig_digits = 12) {
  if (sig_digits < 1) throw std::domain_error("need at least one significant digit");
  if (r == 0) return "0";
  BigInt num = numerator(r);
  const BigInt den = denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;

  // exponent10 = floor(log10(num/den))
  int exponent10 = 0;
  {
    BigInt lo = num, hi = den;  // compare num/den against powers of ten
    while (lo >= hi * 10) {
      hi *= 10;
      ++exponent10;
    }
    while (lo < hi) {
      lo *= 10;
      --exponent10;
    }
  }

  // Round-half-up integer with exactly sig_digits digits.
  const int shift = sig_digits - 1 - exponent10;
  BigInt scaled_num = num, scaled_den = den;
  if (shift >= 0)
    for (int i = 0; i < shift; ++i) scaled_num *= 10;
  else
    for (int i = 0; i < -shift; ++i) scaled_den *= 10;
  BigInt digits = scaled_num / scaled_den;
  if ((scaled_num % scaled_den) * 2 >= scaled_den) ++digits;
  std::string ds = digits.str();
  if (static_cast<int>(ds.size()) > sig_digits) {  // rounding carried over, e.g. 999.. -> 1000..
    ds.pop_back();
    ++exponent10;
  }
  while (ds.size() > 1 && ds.back() == '0') ds.pop_back();

  std::string out;
  if (exponent10 >= 0 && exponent10 < sig_digits + 3) {
    // Plain notation: place the decimal point, padding with zeros if needed.
    if (static_cast<int>(ds.size()) <= exponent10) ds.append(static_cast<size_t>(exponent10) + 1 - ds.size(), '0');
    out = ds.substr(0, static_cast<size_t>(exponent10) + 1);
    if (ds.size() > static_cast<size_t>(exponent10) + 1)
      out += "." + ds.substr(static_cast<size_t>(exponent10) + 1);
  } else if (exponent10 < 0 && exponent10 >= -4) {
    out = "0." + std::string(static_cast<size_t>(-exponent10) - 1, '0') + ds;
  } else {
    out = ds.substr(0, 1);
    if (ds.size() > 1) out += "." + ds.substr(1);
    out += "e" + std::to_string(exponent10);
  }
  return (negative ? "-" : "") + out;
}

}  // namespace stalloc
