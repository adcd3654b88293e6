// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "stalloc/profile.hpp"

namespace stalloc {

/// Allocation g plus the rank vector r: trader k receives goods.at(k), which
/// sits at position ranks[k-1] of his preference row.
struct AllocationResult {
  Permutation goods;
  std::vector<int> ranks;

  bool operator==(const AllocationResult&) const = default;
};

/// Tie-break used when a new trader must enter the market. The final
/// allocation is independent of this choice; the knob exists so tests can
/// prove that.
enum class IntroducePolicy { kSmallestIndex, kLargestIndex, kRotating };

namespace detail {

// Debug check of the proposal-path invariant: the traders that are in the
// market but unallocated form a single chain 0 -> t_1 -> ... -> t_m = t
// linked by the q pointers, and each proposer's current list position points
// at the next trader on the chain.
inline void check_proposal_path(const PreferenceProfile& p, const std::vector<int>& q,
                                const std::vector<int>& r, const std::vector<int>& g, int t) {
  const int n = p.size();
  int chain_len = 0;
  int cur = t;
  while (cur != 0) {
    ++chain_len;
    const int prev = q[static_cast<size_t>(cur)];
    assert(prev >= 0);
    if (prev != 0) {
      assert(p.entry(prev, r[static_cast<size_t>(prev)]) == cur);
    }
    cur = prev;
  }
  int expected = 0;
  for (int k = 1; k <= n; ++k)
    if (g[static_cast<size_t>(k)] == 0 && q[static_cast<size_t>(k)] >= 0) ++expected;
  assert(chain_len == expected);
  (void)chain_len;
  (void)expected;
}

inline int pick_entering_trader(const std::vector<int>& g, int n, IntroducePolicy policy,
                                int& rotate_cursor) {
  switch (policy) {
    case IntroducePolicy::kSmallestIndex:
      for (int k = 1; k <= n; ++k)
        if (g[static_cast<size_t>(k)] == 0) return k;
      return 0;
    case IntroducePolicy::kLargestIndex:
      for (int k = n; k >= 1; --k)
        if (g[static_cast<size_t>(k)] == 0) return k;
      return 0;
    case IntroducePolicy::kRotating:
      for (int step = 0; step < n; ++step) {
        const int k = (rotate_cursor + step) % n + 1;
        if (g[static_cast<size_t>(k)] == 0) {
          rotate_cursor = k % n;
          return k;
        }
      }
      return 0;
  }
  return 0;
}

}  // namespace detail

/// Computes the unique stable allocation by sequential proposal rounds:
/// traders point at their best remaining choice, and every cycle of mutual
/// best choices is frozen into the allocation.
inline AllocationResult stable_allocation(const PreferenceProfile& p,
                                          IntroducePolicy policy = IntroducePolicy::kSmallestIndex) {
  const int n = p.size();
  // 1-based working arrays. q[k]: trader currently proposing to k, 0 when k
  // has proposed but nobody wants k's goods yet, -1 when k has not entered.
  std::vector<int> q(static_cast<size_t>(n) + 1, -1);
  std::vector<int> r(static_cast<size_t>(n) + 1, 0);
  std::vector<int> g(static_cast<size_t>(n) + 1, 0);
  int rotate_cursor = 0;

  for (;;) {
    int t = detail::pick_entering_trader(g, n, policy, rotate_cursor);
    if (t == 0) break;  // everyone allocated
    q[static_cast<size_t>(t)] = 0;

    for (;;) {
#ifndef NDEBUG
      detail::check_proposal_path(p, q, r, g, t);
#endif
      // Propose: advance t to his best remaining choice s.
      int s;
      do {
        ++r[static_cast<size_t>(t)];
        s = p.entry(t, r[static_cast<size_t>(t)]);
      } while (g[static_cast<size_t>(s)] > 0);

      if (q[static_cast<size_t>(s)] < 0) {
        // s has not entered yet: s joins the chain and proposes next.
        q[static_cast<size_t>(s)] = t;
        t = s;
        continue;
      }

      // A cycle of best choices closed at s; freeze it into g.
      const int resume = q[static_cast<size_t>(s)];
      int cur = s;
      for (;;) {
        const int good = p.entry(cur, r[static_cast<size_t>(cur)]);
        g[static_cast<size_t>(cur)] = good;
        cur = good;
        if (g[static_cast<size_t>(cur)] > 0) break;
      }
      if (resume == 0) break;  // chain empty, introduce someone new
      t = resume;
    }
  }

  std::vector<int> goods(static_cast<size_t>(n)), ranks(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) {
    goods[static_cast<size_t>(k) - 1] = g[static_cast<size_t>(k)];
    ranks[static_cast<size_t>(k) - 1] = r[static_cast<size_t>(k)];
    assert(p.entry(k, r[static_cast<size_t>(k)]) == g[static_cast<size_t>(k)]);
  }
  return AllocationResult{Permutation(std::move(goods)), std::move(ranks)};
}

/// First-come-first-served under the given priority order: the trader with
/// priority k takes the first item of his list not claimed by higher
/// priorities.
inline AllocationResult uniform_hash_allocation(const PreferenceProfile& p,
                                                const Permutation& priority) {
  const int n = p.size();
  if (priority.size() != n) throw std::invalid_argument("priority has wrong size");
  std::vector<char> taken(static_cast<size_t>(n) + 1, 0);
  std::vector<int> goods(static_cast<size_t>(n)), ranks(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const int k = priority.at(i);
    int j = 1;
    while (taken[static_cast<size_t>(p.entry(k, j))]) ++j;
    const int good = p.entry(k, j);
    taken[static_cast<size_t>(good)] = 1;
    goods[static_cast<size_t>(k) - 1] = good;
    ranks[static_cast<size_t>(k) - 1] = j;
  }
  return AllocationResult{Permutation(std::move(goods)), std::move(ranks)};
}

/// Recovers a priority order that makes uniform_hash_allocation reproduce g:
/// repeatedly peel a trader whose best remaining choice is exactly his
/// allocated good. Succeeds iff g satisfies the local-optimality predicate;
/// throws std::invalid_argument otherwise.
inline Permutation priority_reconstruction(const PreferenceProfile& p, const Permutation& g) {
  const int n = p.size();
  if (g.size() != n) throw std::invalid_argument("allocation has wrong size");
  std::vector<char> taken(static_cast<size_t>(n) + 1, 0);
  std::vector<char> placed(static_cast<size_t>(n) + 1, 0);
  std::vector<int> pi;
  pi.reserve(static_cast<size_t>(n));
  for (int step = 0; step < n; ++step) {
    int found = 0;
    for (int k = 1; k <= n && found == 0; ++k) {
      if (placed[static_cast<size_t>(k)]) continue;
      int j = 1;
      while (taken[static_cast<size_t>(p.entry(k, j))]) ++j;
      if (p.entry(k, j) == g.at(k)) found = k;
    }
    if (found == 0)
      throw std::invalid_argument("allocation is not locally optimal; no priority reproduces it");
    pi.push_back(found);
    placed[static_cast<size_t>(found)] = 1;
    taken[static_cast<size_t>(g.at(found))] = 1;
  }
  return Permutation(std::move(pi));
}

}  // namespace stalloc
