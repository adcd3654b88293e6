// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stalloc/permutation.hpp"

namespace stalloc {

/// A market instance: trader k's ranking of all n goods is row k, a
/// permutation of {1..n} listed from most to least preferred.
class PreferenceProfile {
 public:
  explicit PreferenceProfile(std::vector<Permutation> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("profile must have at least one row");
    const int n = static_cast<int>(rows_.size());
    for (const Permutation& row : rows_)
      if (row.size() != n)
        throw std::invalid_argument("profile rows must all have length n");
    build_positions();
  }

  int size() const { return static_cast<int>(rows_.size()); }

  const Permutation& row(int k) const { return rows_[static_cast<size_t>(k) - 1]; }

  /// p_{kj}: trader k's j-th favourite good. 1-based.
  int entry(int k, int j) const { return rows_[static_cast<size_t>(k) - 1].at(j); }

  /// Position of `good` in trader k's row (the rank k assigns it).
  int rank_of(int k, int good) const {
    return pos_[static_cast<size_t>(k) - 1][static_cast<size_t>(good) - 1];
  }

  /// True iff trader k prefers good a to good b (a precedes b in row k).
  bool prefers(int k, int a, int b) const { return rank_of(k, a) < rank_of(k, b); }

  bool operator==(const PreferenceProfile& o) const { return rows_ == o.rows_; }

 private:
  void build_positions() {
    const int n = size();
    pos_.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j)
        pos_[static_cast<size_t>(k) - 1][static_cast<size_t>(entry(k, j)) - 1] = j;
  }

  std::vector<Permutation> rows_;
  std::vector<std::vector<int>> pos_;  // pos_[k-1][good-1] = rank
};

/// Checks raw rows and builds a profile. Raw rows must each be a permutation
/// of {1..n} where n is the number of rows.
inline PreferenceProfile validate_profile(const std::vector<std::vector<int>>& raw) {
  if (raw.empty()) throw std::invalid_argument("profile must have at least one row");
  const int n = static_cast<int>(raw.size());
  std::vector<Permutation> rows;
  rows.reserve(raw.size());
  for (int k = 1; k <= n; ++k) {
    const std::vector<int>& r = raw[static_cast<size_t>(k) - 1];
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("row " + std::to_string(k) + " has length " +
                                  std::to_string(r.size()) + ", expected " + std::to_string(n));
    if (!is_permutation_values(r))
      throw std::invalid_argument("row " + std::to_string(k) + " is not a permutation of 1.." +
                                  std::to_string(n));
    rows.push_back(Permutation(r));
  }
  return PreferenceProfile(std::move(rows));
}

/// Relabels rows: the output gives row sigma(k) the input's row k, so trader
/// sigma(k) uses the list trader k used before the shuffle.
inline PreferenceProfile shuffle_profile(const PreferenceProfile& p, const Permutation& sigma) {
  const int n = p.size();
  if (sigma.size() != n) throw std::invalid_argument("shuffling has wrong size");
  std::vector<Permutation> rows(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) rows[static_cast<size_t>(sigma.at(k)) - 1] = p.row(k);
  return PreferenceProfile(std::move(rows));
}

/// Text format: first line n, then n lines of n space-separated 1-based
/// integers; nothing after that.
inline PreferenceProfile parse_profile(std::istream& in) {
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("profile: missing trader count");
  if (n < 1) throw std::invalid_argument("profile: trader count must be >= 1");
  std::vector<std::vector<int>> raw(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (!(in >> raw[static_cast<size_t>(k)][static_cast<size_t>(j)]))
        throw std::invalid_argument("profile: truncated row " + std::to_string(k + 1));
  std::string rest;
  if (in >> rest) throw std::invalid_argument("profile: trailing data '" + rest + "'");
  return validate_profile(raw);
}

inline PreferenceProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile file: " + path);
  return parse_profile(in);
}

inline std::string format_profile(const PreferenceProfile& p) {
  std::ostringstream os;
  os << p.size() << '\n';
  for (int k = 1; k <= p.size(); ++k) os << p.row(k).to_string() << '\n';
  return os.str();
}

}  // namespace stalloc
