// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/profile.hpp"

namespace stalloc {

/// Working state shared by both directions of the priority<->shuffling
/// correspondence: each row of the profile cut down to the prefix ending at
/// the circled (allocated) good, with deletions handled as tombstones so the
/// circled element always stays the last live entry of its row.
class TruncatedTableau {
 public:
  TruncatedTableau(const PreferenceProfile& p, const Permutation& circled)
      : n_(p.size()), circled_(circled) {
    if (circled.size() != n_) throw std::invalid_argument("circled allocation has wrong size");
    rows_.resize(static_cast<size_t>(n_));
    alive_.resize(static_cast<size_t>(n_));
    alive_count_.assign(static_cast<size_t>(n_), 0);
    for (int k = 1; k <= n_; ++k) {
      const int len = p.rank_of(k, circled.at(k));
      std::vector<int>& row = rows_[static_cast<size_t>(k) - 1];
      row.reserve(static_cast<size_t>(len));
      for (int j = 1; j <= len; ++j) row.push_back(p.entry(k, j));
      alive_[static_cast<size_t>(k) - 1].assign(static_cast<size_t>(len), 1);
      alive_count_[static_cast<size_t>(k) - 1] = len;
    }
  }

  int size() const { return n_; }
  const Permutation& circled() const { return circled_; }

  /// True iff the circled good is the only live entry of row k.
  bool stands_alone(int k) const { return alive_count_[static_cast<size_t>(k) - 1] == 1; }

  /// Tombstones `value` in every row where it is not the circled last entry.
  void remove_uncircled(int value) {
    for (int k = 1; k <= n_; ++k) {
      std::vector<int>& row = rows_[static_cast<size_t>(k) - 1];
      std::vector<char>& alive = alive_[static_cast<size_t>(k) - 1];
      for (size_t j = 0; j + 1 < row.size(); ++j) {
        if (row[j] == value && alive[j]) {
          alive[j] = 0;
          --alive_count_[static_cast<size_t>(k) - 1];
        }
      }
    }
  }

 private:
  int n_;
  Permutation circled_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<char>> alive_;
  std::vector<int> alive_count_;
};

/// Builds the shuffling consistent with the priority order `pi`: hashing on p
/// with priorities pi yields the same allocation as the stable allocation of
/// the profile shuffled by the returned sigma.
inline Permutation pi_to_sigma(const PreferenceProfile& p, const Permutation& pi) {
  const int n = p.size();
  if (pi.size() != n) throw std::invalid_argument("priority has wrong size");
  const Permutation g = uniform_hash_allocation(p, pi).goods;
  TruncatedTableau tab(p, g);

  std::vector<char> in_x(static_cast<size_t>(n) + 1, 0);
  std::vector<char> in_y(static_cast<size_t>(n) + 1, 0);
  for (int k = 1; k <= n; ++k) in_y[static_cast<size_t>(k)] = tab.stands_alone(k) ? 1 : 0;

  std::vector<int> sigma(static_cast<size_t>(n) + 1, 0);
  int m = 0;
  for (;;) {
#ifndef NDEBUG
    for (int k = 1; k <= n; ++k)
      assert(!in_x[static_cast<size_t>(k)] || in_y[static_cast<size_t>(k)]);
    assert(in_y[static_cast<size_t>(pi.at(m + 1))] && !in_x[static_cast<size_t>(pi.at(m + 1))]);
#endif
    // Smallest k past m at which the current block of priorities must close.
    int k = m + 1;
    while (k < n) {
      const int nxt = pi.at(k + 1);
      const bool in_y_not_x = in_y[static_cast<size_t>(nxt)] && !in_x[static_cast<size_t>(nxt)];
      if ((in_y_not_x && nxt > pi.at(m + 1)) || !in_y[static_cast<size_t>(nxt)]) break;
      ++k;
    }
    // The block pi(m+1..k) becomes a cycle of sigma assignments.
    for (int j = m + 1; j < k; ++j)
      sigma[static_cast<size_t>(pi.at(j))] = g.at(pi.at(j + 1));
    sigma[static_cast<size_t>(pi.at(k))] = g.at(pi.at(m + 1));
    if (k == n) break;

    for (int j = m + 1; j <= k; ++j) tab.remove_uncircled(g.at(pi.at(j)));
    if (!in_y[static_cast<size_t>(pi.at(k + 1))]) {
      in_x = in_y;
      for (int kk = 1; kk <= n; ++kk)
        in_y[static_cast<size_t>(kk)] = tab.stands_alone(kk) ? 1 : 0;
    }
    m = k;
  }
  return Permutation(std::vector<int>(sigma.begin() + 1, sigma.end()));
}

/// Inverse direction: recovers the priority order from a shuffling, yielding
/// the unique pi with pi_to_sigma(p, pi) == sigma.
inline Permutation sigma_to_pi(const PreferenceProfile& p, const Permutation& sigma) {
  const int n = p.size();
  if (sigma.size() != n) throw std::invalid_argument("shuffling has wrong size");
  const PreferenceProfile shuffled = shuffle_profile(p, sigma);
  const Permutation stable = stable_allocation(shuffled).goods;
  // Circle, in row k (trader sigma(k)'s list after the shuffle), the good the
  // stable allocation hands that trader.
  std::vector<int> gvals(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) gvals[static_cast<size_t>(k) - 1] = stable.at(sigma.at(k));
  const Permutation g{std::move(gvals)};
  const Permutation ginv = g.inverse();

  TruncatedTableau tab(p, g);
  // Row a points at the row whose circled good is sigma(a); these pointers
  // are fixed for the whole construction, only eligibility evolves.
  std::vector<int> succ(static_cast<size_t>(n) + 1, 0);
  for (int a = 1; a <= n; ++a) succ[static_cast<size_t>(a)] = ginv.at(sigma.at(a));
  // Decompose succ into cycles once.
  std::vector<int> cycle_of(static_cast<size_t>(n) + 1, -1);
  std::vector<std::vector<int>> cycles;
  for (int a = 1; a <= n; ++a) {
    if (cycle_of[static_cast<size_t>(a)] >= 0) continue;
    std::vector<int> members;
    int cur = a;
    do {
      cycle_of[static_cast<size_t>(cur)] = static_cast<int>(cycles.size());
      members.push_back(cur);
      cur = succ[static_cast<size_t>(cur)];
    } while (cur != a);
    cycles.push_back(std::move(members));
  }

  std::vector<char> in_x(static_cast<size_t>(n) + 1, 0);
  std::vector<char> in_y(static_cast<size_t>(n) + 1, 0);
  for (int k = 1; k <= n; ++k) in_y[static_cast<size_t>(k)] = tab.stands_alone(k) ? 1 : 0;
  std::vector<char> consumed(cycles.size(), 0);

  std::vector<int> pi;
  pi.reserve(static_cast<size_t>(n));
  while (static_cast<int>(pi.size()) < n) {
    // Record every cycle currently contained in Y, smallest leader first.
    for (;;) {
      int best_cycle = -1;
      int best_leader = 0;
      for (size_t c = 0; c < cycles.size(); ++c) {
        if (consumed[c]) continue;
        bool eligible = true;
        int leader = 0;
        for (int a : cycles[c]) {
          if (!in_y[static_cast<size_t>(a)]) {
            eligible = false;
            break;
          }
          if (!in_x[static_cast<size_t>(a)] && a > leader) leader = a;
        }
        if (!eligible) continue;
        assert(leader != 0);  // every eligible cycle has a member outside X
        if (best_cycle < 0 || leader < best_leader) {
          best_cycle = static_cast<int>(c);
          best_leader = leader;
        }
      }
      if (best_cycle < 0) break;
      consumed[static_cast<size_t>(best_cycle)] = 1;
      int a = best_leader;
      for (size_t i = 0; i < cycles[static_cast<size_t>(best_cycle)].size(); ++i) {
        pi.push_back(a);
        a = succ[static_cast<size_t>(a)];
      }
      for (int member : cycles[static_cast<size_t>(best_cycle)])
        tab.remove_uncircled(sigma.at(member));
    }
    if (static_cast<int>(pi.size()) == n) break;

    in_x = in_y;
    bool grew = false;
    for (int k = 1; k <= n; ++k) {
      const char now = tab.stands_alone(k) ? 1 : 0;
      if (now && !in_y[static_cast<size_t>(k)]) grew = true;
      in_y[static_cast<size_t>(k)] = now;
    }
    if (!grew)
      throw std::logic_error("inverse construction stalled; input was not a valid shuffling");
  }
  return Permutation(std::move(pi));
}

/// True iff hashing p under pi and stable-allocating the sigma-shuffled
/// profile hand every trader position the same good.
inline bool is_consistent(const PreferenceProfile& p, const Permutation& pi,
                          const Permutation& sigma) {
  const int n = p.size();
  if (pi.size() != n || sigma.size() != n)
    throw std::invalid_argument("permutation has wrong size");
  const Permutation hashed = uniform_hash_allocation(p, pi).goods;
  const Permutation stable = stable_allocation(shuffle_profile(p, sigma)).goods;
  for (int k = 1; k <= n; ++k)
    if (stable.at(sigma.at(k)) != hashed.at(k)) return false;
  return true;
}

}  // namespace stalloc
