// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "stalloc/profile.hpp"

namespace stalloc {

/// Coalition/permutation enumeration cost grows as sum C(n,t)*t!, so the
/// brute-force checkers refuse to run past this bound unless told otherwise.
inline constexpr int kDefaultBruteForceBound = 6;

namespace detail {

// True iff some reallocation h of the members' own goods makes every member
// weakly better off and at least one strictly better off than under g.
// Members own their index-named goods, so h is a bijection members->members.
inline bool coalition_blocks(const PreferenceProfile& p, const Permutation& g,
                             const std::vector<int>& members) {
  std::vector<int> h(members);  // ascending start for std::next_permutation
  do {
    bool all_weak = true;
    bool any_strict = false;
    for (size_t i = 0; i < members.size(); ++i) {
      const int k = members[i];
      const int hk = h[i];
      if (hk == g.at(k)) continue;
      if (!p.prefers(k, hk, g.at(k))) {
        all_weak = false;
        break;
      }
      any_strict = true;
    }
    if (all_weak && any_strict) return true;
  } while (std::next_permutation(h.begin(), h.end()));
  return false;
}

}  // namespace detail

/// Exhaustive core check: g is in the core iff no coalition can reallocate
/// its own initial goods to weakly improve every member and strictly improve
/// one. Throws std::domain_error when n exceeds `bound`.
inline bool is_core_allocation(const PreferenceProfile& p, const Permutation& g,
                               int bound = kDefaultBruteForceBound) {
  const int n = p.size();
  if (n > bound) throw std::domain_error("brute-force core check bound exceeded");
  if (g.size() != n) throw std::invalid_argument("allocation has wrong size");
  std::vector<int> members;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    members.clear();
    for (int k = 1; k <= n; ++k)
      if (mask & (1u << (k - 1))) members.push_back(k);
    if (detail::coalition_blocks(p, g, members)) return false;
  }
  return true;
}

/// Grand-coalition-only version of the core check: no full reallocation may
/// weakly improve everyone and strictly improve someone.
inline bool is_locally_optimal(const PreferenceProfile& p, const Permutation& g,
                               int bound = kDefaultBruteForceBound) {
  const int n = p.size();
  if (n > bound) throw std::domain_error("brute-force local-optimality bound exceeded");
  if (g.size() != n) throw std::invalid_argument("allocation has wrong size");
  std::vector<int> members(static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k) members[static_cast<size_t>(k) - 1] = k;
  return !detail::coalition_blocks(p, g, members);
}

}  // namespace stalloc
