// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "stalloc/rational.hpp"

namespace stalloc {

/// Dense polynomial in z with exact rational coefficients; coefficient i is
/// the weight of z^i. Trailing zero coefficients are trimmed, so the leading
/// coefficient is nonzero unless the polynomial is zero.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;  // the zero polynomial

  explicit RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
  }

  static RationalPolynomial one() { return RationalPolynomial({Rational(1)}); }

  /// Degree, or -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Rational coeff(int power) const {
    if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0;
    return coeffs_[static_cast<size_t>(power)];
  }

  const std::vector<Rational>& coefficients() const { return coeffs_; }

  /// Multiplies by the monic linear factor (z + c).
  RationalPolynomial times_linear(const Rational& c) const {
    std::vector<Rational> out(coeffs_.size() + 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      out[i + 1] += coeffs_[i];
      out[i] += coeffs_[i] * c;
    }
    return RationalPolynomial(std::move(out));
  }

  RationalPolynomial operator*(const RationalPolynomial& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return RationalPolynomial();
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
      for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return RationalPolynomial(std::move(out));
  }

  bool operator==(const RationalPolynomial&) const = default;

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    for (int i = degree(); i >= 0; --i) {
      const Rational& c = coeffs_[static_cast<size_t>(i)];
      if (c == 0) continue;
      if (os.tellp() > 0) os << " + ";
      os << to_fraction_string(c);
      if (i >= 1) os << " z";
      if (i >= 2) os << "^" << i;
    }
    if (os.tellp() == 0) return "0";
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

}  // namespace stalloc
