// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "stalloc/allocation.hpp"
#include "stalloc/enumeration.hpp"
#include "stalloc/exact_stats.hpp"
#include "stalloc/random.hpp"

namespace stalloc {

/// Seeded sampling summary. Sample i always uses the substream
/// mix_seed(seed, i), so the accumulated integer sums are identical for any
/// worker count; floating-point only enters in the derived accessors.
struct MonteCarloSummary {
  int n = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  AllocMethod method = AllocMethod::kStable;

  // Exact accumulators over samples.
  BigInt sum_rank_sum = 0;         // sum of (r_1+...+r_n)
  BigInt sum_rank_sum_sq = 0;      // sum of (r_1+...+r_n)^2
  BigInt sum_square_sum = 0;       // sum of (r_1^2+...+r_n^2)
  BigInt sum_max_rank = 0;         // sum of max r
  uint64_t count_max_le_half = 0;  // samples with max r <= floor(n/2)

  // Exact targets from the closed forms.
  Rational exact_mean_rank_sum;
  Rational exact_var_rank_sum;
  Rational exact_mean_square_sum;
  Rational exact_prob_max_le_half;

  double mean_rank_sum() const { return to_double(Rational(sum_rank_sum, samples)); }
  double mean_rank_sum_sq() const { return to_double(Rational(sum_rank_sum_sq, samples)); }
  double mean_square_sum() const { return to_double(Rational(sum_square_sum, samples)); }
  double mean_max_rank() const { return to_double(Rational(sum_max_rank, samples)); }
  double prob_max_le_half() const {
    return static_cast<double>(count_max_le_half) / static_cast<double>(samples);
  }
  /// Unbiased sample variance of the rank sum.
  double var_rank_sum() const {
    if (samples < 2) return 0.0;
    const Rational var = (Rational(sum_rank_sum_sq) -
                          Rational(sum_rank_sum * sum_rank_sum, samples)) /
                         Rational(samples - 1);
    return to_double(var);
  }
  /// Standard error of mean_rank_sum.
  double se_mean_rank_sum() const {
    return std::sqrt(var_rank_sum() / static_cast<double>(samples));
  }
};

namespace detail {

struct McAccumulator {
  unsigned long long rank_sum = 0, max_rank = 0, max_le_half = 0;
  // (sum r)^2 reaches n^4 per sample; keep the accumulators wide.
  unsigned __int128 rank_sum_sq = 0, square_sum = 0;
};

inline BigInt to_bigint(unsigned __int128 v) {
  BigInt out = static_cast<uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<uint64_t>(v);
  return out;
}

inline McAccumulator monte_carlo_range(int n, uint64_t seed, AllocMethod method,
                                       const Permutation& priority, uint64_t begin,
                                       uint64_t end) {
  McAccumulator acc;
  const int half = n / 2;
  for (uint64_t i = begin; i < end; ++i) {
    RngStream rng(mix_seed(seed, i));
    const PreferenceProfile profile = random_profile(n, rng);
    const AllocationResult result = method == AllocMethod::kStable
                                        ? stable_allocation(profile)
                                        : uniform_hash_allocation(profile, priority);
    unsigned long long s = 0, sq = 0, mx = 0;
    for (int r : result.ranks) {
      s += static_cast<unsigned long long>(r);
      sq += static_cast<unsigned long long>(r) * static_cast<unsigned long long>(r);
      if (static_cast<unsigned long long>(r) > mx) mx = static_cast<unsigned long long>(r);
    }
    acc.rank_sum += s;
    acc.rank_sum_sq += static_cast<unsigned __int128>(s) * s;
    acc.square_sum += sq;
    acc.max_rank += mx;
    if (mx <= static_cast<unsigned long long>(half) && half >= 1) ++acc.max_le_half;
  }
  return acc;
}

}  // namespace detail

inline MonteCarloSummary monte_carlo_summary(int n, uint64_t samples, uint64_t seed,
                                             AllocMethod method = AllocMethod::kStable,
                                             const std::optional<Permutation>& priority = std::nullopt,
                                             int workers = 1) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const Permutation prio = priority.value_or(Permutation::identity(n));
  if (prio.size() != n) throw std::invalid_argument("priority has wrong size");

  std::vector<detail::McAccumulator> parts(static_cast<size_t>(workers));
  if (workers == 1) {
    parts[0] = detail::monte_carlo_range(n, seed, method, prio, 0, samples);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const uint64_t begin = samples * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
      const uint64_t end =
          samples * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(workers);
      threads.emplace_back([&, w, begin, end] {
        parts[static_cast<size_t>(w)] = detail::monte_carlo_range(n, seed, method, prio, begin, end);
      });
    }
    for (std::thread& t : threads) t.join();
  }

  MonteCarloSummary out;
  out.n = n;
  out.samples = samples;
  out.seed = seed;
  out.method = method;
  for (const detail::McAccumulator& acc : parts) {
    out.sum_rank_sum += acc.rank_sum;
    out.sum_rank_sum_sq += detail::to_bigint(acc.rank_sum_sq);
    out.sum_square_sum += detail::to_bigint(acc.square_sum);
    out.sum_max_rank += acc.max_rank;
    out.count_max_le_half += acc.max_le_half;
  }
  out.exact_mean_rank_sum = expected_rank_sum(n);
  out.exact_var_rank_sum = rank_sum_variance(n);
  out.exact_mean_square_sum = expected_square_sum(n);
  out.exact_prob_max_le_half = n >= 2 ? max_rank_at_most(n, n / 2) : Rational(0);
  return out;
}

}  // namespace stalloc
