// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "stalloc/rational.hpp"

namespace stalloc {

/// Exact counts of rank multisets: key = ranks sorted ascending, value =
/// number of instances that produced that multiset. Merging is associative
/// and commutative, so partitioned enumerations combine deterministically.
struct RankDistribution {
  std::map<std::vector<int>, BigInt> counts;
  BigInt total = 0;

  void add(std::vector<int> ranks, const BigInt& weight = 1) {
    std::sort(ranks.begin(), ranks.end());
    counts[std::move(ranks)] += weight;
    total += weight;
  }

  void merge(const RankDistribution& other) {
    for (const auto& [key, count] : other.counts) counts[key] += count;
    total += other.total;
  }

  bool operator==(const RankDistribution&) const = default;
};

}  // namespace stalloc
