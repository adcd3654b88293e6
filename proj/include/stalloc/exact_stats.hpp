// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

#include "stalloc/polynomial.hpp"
#include "stalloc/rational.hpp"

// Closed forms for the rank statistics of random stable allocation. Ranks in
// the unique stable allocation have, multiset-wise, the same distribution as
// first-come-first-served ranks under a uniform priority order, so every
// quantity here is derived from the serve-order tail probabilities q_exceed.
// All results are exact rationals; floating point appears only in callers'
// display code.

namespace stalloc {

/// Harmonic number H_n (order 1) or H_n^(2) (order 2).
inline Rational harmonic(int n, int order = 1) {
  if (n < 1) throw std::domain_error("harmonic requires n >= 1");
  if (order != 1 && order != 2) throw std::domain_error("harmonic order must be 1 or 2");
  Rational sum = 0;
  for (int k = 1; k <= n; ++k) {
    const BigInt kk = order == 1 ? BigInt(k) : BigInt(k) * k;
    sum += Rational(1, kk);
  }
  return sum;
}

/// Probability that the k-th served trader needs rank greater than j, i.e.
/// his first j favourites were already claimed: C(k-1,j)/C(n,j). Equals 1 at
/// j=0 and 0 once j >= k.
inline Rational q_exceed(int n, int k, int j) {
  if (k < 1 || k > n) throw std::domain_error("q_exceed requires 1 <= k <= n");
  if (j < 0) throw std::domain_error("q_exceed requires j >= 0");
  if (j >= k) return 0;
  return Rational(binomial(k - 1, j), binomial(n, j));
}

/// Closed form of sum_j C(j,m) * q_exceed(n,k,j):
/// (n+1)/(n+m+2-k) * C(k-1,m)/C(n+m+1-k,m).
inline Rational weighted_q_sum(int n, int k, int m) {
  if (k < 1 || k > n) throw std::domain_error("weighted_q_sum requires 1 <= k <= n");
  if (m < 0) throw std::domain_error("weighted_q_sum requires m >= 0");
  return Rational(n + 1, n + m + 2 - k) *
         Rational(binomial(k - 1, m), binomial(n + m + 1 - k, m));
}

/// E[(z+r_1)...(z+r_n)] = prod_k (z + (n+1)/(n+2-k)), expanded.
inline RationalPolynomial expected_rank_poly(int n) {
  if (n < 1) throw std::domain_error("expected_rank_poly requires n >= 1");
  RationalPolynomial poly = RationalPolynomial::one();
  for (int k = 1; k <= n; ++k) poly = poly.times_linear(Rational(n + 1, n + 2 - k));
  return poly;
}

/// E[r_1 + ... + r_n] = (n+1) H_n - n.
inline Rational expected_rank_sum(int n) {
  if (n < 1) throw std::domain_error("expected_rank_sum requires n >= 1");
  return Rational(n + 1) * harmonic(n, 1) - n;
}

/// Unsigned Stirling number of the first kind (cycle count), via
/// [n k] = (n-1)[n-1 k] + [n-1 k-1].
inline BigInt stirling_cycle(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("stirling_cycle requires 0 <= k <= n");
  std::vector<BigInt> row(static_cast<size_t>(n) + 1, 0);
  row[0] = 1;  // [0 0] = 1
  for (int m = 1; m <= n; ++m) {
    // descending j so row[j-1] still holds the previous pass's value
    for (int j = m; j >= 1; --j)
      row[static_cast<size_t>(j)] = (m - 1) * row[static_cast<size_t>(j)] + row[static_cast<size_t>(j) - 1];
    row[0] = 0;  // [m 0] = 0 once m >= 1
  }
  return row[static_cast<size_t>(k)];
}

/// Coefficient of z^{n-2} in E[(z+r_1)...(z+r_n)], i.e. the pairwise rank
/// product sum: (n+1)^2/2 (H_n^2 - H_n^(2)) - n(n+1)(H_n - 1).
inline Rational rank_product_coeff(int n) {
  if (n < 2) throw std::domain_error("rank_product_coeff requires n >= 2");
  const Rational h1 = harmonic(n, 1);
  const Rational h2 = harmonic(n, 2);
  return Rational(BigInt(n + 1) * (n + 1), 2) * (h1 * h1 - h2) -
         Rational(BigInt(n) * (n + 1)) * (h1 - 1);
}

/// E[(z+r_1^2)...(z+r_n^2)] = prod_k (z + (n+1)(n+1+k)/((n+2-k)(n+3-k))).
inline RationalPolynomial expected_square_poly(int n) {
  if (n < 1) throw std::domain_error("expected_square_poly requires n >= 1");
  RationalPolynomial poly = RationalPolynomial::one();
  for (int k = 1; k <= n; ++k)
    poly = poly.times_linear(
        Rational(BigInt(n + 1) * (n + 1 + k), BigInt(n + 2 - k) * (n + 3 - k)));
  return poly;
}

/// E[r_1^2 + ... + r_n^2] = (n+1)(n - H_n) + n.
inline Rational expected_square_sum(int n) {
  if (n < 1) throw std::domain_error("expected_square_sum requires n >= 1");
  return Rational(n + 1) * (Rational(n) - harmonic(n, 1)) + n;
}

/// E[(r_1+...+r_n)^2] = (n+1)^2 (H_n^2 - H_n^(2)) - (n+1)(2n+1) H_n + n(3n+4).
inline Rational rank_sum_second_moment(int n) {
  if (n < 1) throw std::domain_error("rank_sum_second_moment requires n >= 1");
  const Rational h1 = harmonic(n, 1);
  const Rational h2 = harmonic(n, 2);
  return Rational(BigInt(n + 1) * (n + 1)) * (h1 * h1 - h2) -
         Rational(BigInt(n + 1) * (2 * n + 1)) * h1 + Rational(BigInt(n) * (3 * n + 4));
}

/// Var(r_1+...+r_n) = 2n(n+2) - (n+1)^2 H_n^(2) - (n+1) H_n,
/// asymptotically (2 - pi^2/6) n^2.
inline Rational rank_sum_variance(int n) {
  if (n < 1) throw std::domain_error("rank_sum_variance requires n >= 1");
  return Rational(BigInt(2) * n * (n + 2)) - Rational(BigInt(n + 1) * (n + 1)) * harmonic(n, 2) -
         Rational(n + 1) * harmonic(n, 1);
}

/// Expected in-profile variance of the ranks,
/// E[sum r^2 / n] - E[(sum r / n)^2], asymptotically n + O(log n)^2.
inline Rational expected_rank_variance(int n) {
  if (n < 1) throw std::domain_error("expected_rank_variance requires n >= 1");
  return expected_square_sum(n) / n - rank_sum_second_moment(n) / (BigInt(n) * n);
}

/// P(max rank <= m) = prod_k (1 - q_exceed(n,k,m)).
inline Rational max_rank_at_most(int n, int m) {
  if (m < 1 || m > n) throw std::domain_error("max_rank_at_most requires 1 <= m <= n");
  Rational prod = 1;
  for (int k = 1; k <= n; ++k) prod *= (Rational(1) - q_exceed(n, k, m));
  return prod;
}

}  // namespace stalloc
