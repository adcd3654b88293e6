// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stalloc {

/// Checks that `values` holds each of 1..n exactly once.
inline bool is_permutation_values(const std::vector<int>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
  for (int v : values) {
    if (v < 1 || v > n || seen[static_cast<size_t>(v)]) return false;
    seen[static_cast<size_t>(v)] = 1;
  }
  return true;
}

/// A permutation of {1,...,n}. Values are 1-based throughout: at(i) is the
/// image of i for 1 <= i <= n.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> values) : vals_(std::move(values)) {
    if (vals_.empty()) throw std::invalid_argument("permutation must be nonempty");
    if (!is_permutation_values(vals_))
      throw std::invalid_argument("values are not a permutation of 1..n");
  }

  static Permutation identity(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  int size() const { return static_cast<int>(vals_.size()); }

  int at(int i) const { return vals_[static_cast<size_t>(i) - 1]; }

  const std::vector<int>& values() const { return vals_; }

  Permutation inverse() const {
    std::vector<int> inv(vals_.size());
    for (int i = 1; i <= size(); ++i) inv[static_cast<size_t>(at(i)) - 1] = i;
    return Permutation(std::move(inv));
  }

  /// (this o other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const {
    if (other.size() != size())
      throw std::invalid_argument("composing permutations of different sizes");
    std::vector<int> out(vals_.size());
    for (int i = 1; i <= size(); ++i) out[static_cast<size_t>(i) - 1] = at(other.at(i));
    return Permutation(std::move(out));
  }

  bool operator==(const Permutation&) const = default;
  bool operator<(const Permutation& o) const { return vals_ < o.vals_; }

  std::string to_string() const {
    std::ostringstream os;
    for (int i = 1; i <= size(); ++i) {
      if (i > 1) os << ' ';
      os << at(i);
    }
    return os.str();
  }

 private:
  std::vector<int> vals_;
};

/// Parses "5,3,4,9,1,8,2,7,6" into a Permutation.
inline Permutation parse_permutation_csv(const std::string& text) {
  std::vector<int> vals;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(token, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad permutation entry '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size())
      throw std::invalid_argument("bad permutation entry '" + token + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw std::invalid_argument("empty permutation");
  return Permutation(std::move(vals));
}

inline uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial_u64 supports 0..20");
  uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<uint64_t>(i);
  return f;
}

/// All permutations of {1..n} in lexicographic order.
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  std::vector<int> v(static_cast<size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  do {
    out.push_back(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Lexicographic rank (0-based) of a permutation among all of its size.
inline uint64_t permutation_lex_rank(const Permutation& p) {
  const int n = p.size();
  uint64_t rank = 0;
  for (int i = 1; i <= n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j <= n; ++j)
      if (p.at(j) < p.at(i)) ++smaller;
    rank += static_cast<uint64_t>(smaller) * factorial_u64(n - i);
  }
  return rank;
}

/// Inverse of permutation_lex_rank.
inline Permutation nth_permutation(int n, uint64_t rank) {
  if (rank >= factorial_u64(n)) throw std::domain_error("permutation rank out of range");
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    const uint64_t f = factorial_u64(i);
    const size_t idx = static_cast<size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return Permutation(std::move(out));
}

}  // namespace stalloc
