// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/permutation.hpp"
#include "stalloc/profile.hpp"
#include "stalloc/rank_distribution.hpp"

namespace stalloc {

enum class AllocMethod { kStable, kHash };

/// Number of distinct profiles, (n!)^n. Only defined while it fits in 64
/// bits, which covers every enumerable size (n <= 6).
inline uint64_t profile_space_size(int n) {
  if (n < 1 || n > 6) throw std::domain_error("profile index space only supported for n <= 6");
  const uint64_t f = factorial_u64(n);
  uint64_t size = 1;
  for (int i = 0; i < n; ++i) size *= f;
  return size;
}

/// Profile at mixed-radix `index`: row 1 is the most significant digit, and
/// each digit is the lexicographic rank of that row.
inline PreferenceProfile profile_from_index(int n, uint64_t index,
                                            const std::vector<Permutation>& lex_perms) {
  const uint64_t f = factorial_u64(n);
  std::vector<Permutation> rows(static_cast<size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    rows[static_cast<size_t>(k)] = lex_perms[index % f];
    index /= f;
  }
  return PreferenceProfile(std::move(rows));
}

namespace detail {

inline RankDistribution rank_distribution_over_range(int n, AllocMethod method,
                                                     const Permutation& priority, uint64_t begin,
                                                     uint64_t end,
                                                     const std::vector<Permutation>& lex_perms) {
  RankDistribution dist;
  if (begin >= end) return dist;
  const uint64_t f = factorial_u64(n);
  // Odometer over row digits; row n-1 is the fastest digit.
  std::vector<uint64_t> digits(static_cast<size_t>(n), 0);
  uint64_t rest = begin;
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<size_t>(k)] = rest % f;
    rest /= f;
  }
  std::vector<Permutation> rows(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) rows[static_cast<size_t>(k)] = lex_perms[digits[static_cast<size_t>(k)]];
  for (uint64_t idx = begin; idx < end; ++idx) {
    const PreferenceProfile profile{std::vector<Permutation>(rows)};
    const AllocationResult result = method == AllocMethod::kStable
                                        ? stable_allocation(profile)
                                        : uniform_hash_allocation(profile, priority);
    dist.add(result.ranks);
    // advance odometer
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[static_cast<size_t>(k)] < f) {
        rows[static_cast<size_t>(k)] = lex_perms[digits[static_cast<size_t>(k)]];
        break;
      }
      digits[static_cast<size_t>(k)] = 0;
      rows[static_cast<size_t>(k)] = lex_perms[0];
    }
  }
  return dist;
}

}  // namespace detail

/// Exact rank-multiset counts over all (n!)^n profiles for the chosen
/// allocation method. Hash mode serves traders in `priority` order (identity
/// when omitted). Refuses n > 4; the full space is 331776 already at n = 4.
inline RankDistribution exhaustive_rank_distribution(
    int n, AllocMethod method, const std::optional<Permutation>& priority = std::nullopt,
    int workers = 1) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (n > 4) throw std::domain_error("exhaustive enumeration supported only for n <= 4");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const Permutation prio = priority.value_or(Permutation::identity(n));
  if (prio.size() != n) throw std::invalid_argument("priority has wrong size");
  const std::vector<Permutation> lex_perms = all_permutations(n);
  const uint64_t space = profile_space_size(n);

  if (workers == 1)
    return detail::rank_distribution_over_range(n, method, prio, 0, space, lex_perms);

  std::vector<RankDistribution> partials(static_cast<size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const uint64_t begin = space * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
    const uint64_t end = space * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(workers);
    threads.emplace_back([&, w, begin, end] {
      partials[static_cast<size_t>(w)] =
          detail::rank_distribution_over_range(n, method, prio, begin, end, lex_perms);
    });
  }
  for (std::thread& t : threads) t.join();
  RankDistribution dist;
  for (const RankDistribution& part : partials) dist.merge(part);
  return dist;
}

}  // namespace stalloc
