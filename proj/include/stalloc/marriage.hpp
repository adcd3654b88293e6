// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "stalloc/allocation.hpp"
#include "stalloc/enumeration.hpp"
#include "stalloc/permutation.hpp"
#include "stalloc/profile.hpp"
#include "stalloc/random.hpp"
#include "stalloc/rational.hpp"

namespace stalloc {

/// Two-sided market: boys rank girls, girls rank boys; profiles have equal n.
struct MarriageInstance {
  PreferenceProfile boys;
  PreferenceProfile girls;

  MarriageInstance(PreferenceProfile b, PreferenceProfile g)
      : boys(std::move(b)), girls(std::move(g)) {
    if (boys.size() != girls.size())
      throw std::invalid_argument("boys and girls profiles must have equal size");
  }
};

enum class RankConvention { kOneBased, kZeroBased };

namespace detail {

// Proposal engine on flat 0-based arrays, reused across runs so scans stay
// allocation-free. boys_rows[b] points at boy b's row of n girl indices.
class GaleShapleyEngine {
 public:
  explicit GaleShapleyEngine(int n)
      : n_(n), girl_rank_(static_cast<size_t>(n) * static_cast<size_t>(n)),
        fiance_(static_cast<size_t>(n)), next_(static_cast<size_t>(n)) {}

  /// girls_rows: n*n flat matrix, girls_rows[j*n + k] = 0-based boy index of
  /// girl j's k-th choice.
  void set_girls(const int* girls_rows) {
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        girl_rank_[static_cast<size_t>(j) * static_cast<size_t>(n_) +
                   static_cast<size_t>(girls_rows[j * n_ + k])] = k;
  }

  /// Sequential proposals, boys introduced one at a time; a displaced boy
  /// resumes proposing immediately. Returns the male-optimal matching.
  /// wife_out/rank_out may be null; ranks are 1-based. Returns sum of ranks.
  int run(const int* const* boys_rows, int* wife_out, int* rank_out) {
    std::fill(fiance_.begin(), fiance_.end(), -1);
    std::fill(next_.begin(), next_.end(), 0);
    for (int b = 0; b < n_; ++b) {
      int cur = b;
      while (cur >= 0) {
        const int girl = boys_rows[cur][next_[static_cast<size_t>(cur)]++];
        const int holder = fiance_[static_cast<size_t>(girl)];
        if (holder < 0) {
          fiance_[static_cast<size_t>(girl)] = cur;
          cur = -1;
        } else if (girl_rank_[static_cast<size_t>(girl) * static_cast<size_t>(n_) +
                              static_cast<size_t>(cur)] <
                   girl_rank_[static_cast<size_t>(girl) * static_cast<size_t>(n_) +
                              static_cast<size_t>(holder)]) {
          fiance_[static_cast<size_t>(girl)] = cur;
          cur = holder;
        }
      }
    }
    int rank_sum = 0;
    for (int girl = 0; girl < n_; ++girl) {
      const int b = fiance_[static_cast<size_t>(girl)];
      rank_sum += next_[static_cast<size_t>(b)];
      if (wife_out) wife_out[b] = girl;
      if (rank_out) rank_out[b] = next_[static_cast<size_t>(b)];
    }
    return rank_sum;
  }

 private:
  int n_;
  std::vector<int> girl_rank_;
  std::vector<int> fiance_, next_;
};

// Flat 0-based copy of a profile, rows concatenated.
inline std::vector<int> flatten_zero_based(const PreferenceProfile& p) {
  const int n = p.size();
  std::vector<int> flat(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      flat[static_cast<size_t>(k - 1) * static_cast<size_t>(n) + static_cast<size_t>(j - 1)] =
          p.entry(k, j) - 1;
  return flat;
}

}  // namespace detail

/// Male-optimal stable matching; goods.at(k) is the girl matched to boy k and
/// ranks are each boy's 1-based position of his wife in his own list.
inline AllocationResult gale_shapley_male_optimal(const MarriageInstance& inst) {
  const int n = inst.boys.size();
  detail::GaleShapleyEngine engine(n);
  const std::vector<int> girls_flat = detail::flatten_zero_based(inst.girls);
  const std::vector<int> boys_flat = detail::flatten_zero_based(inst.boys);
  engine.set_girls(girls_flat.data());
  std::vector<const int*> rows(static_cast<size_t>(n));
  for (int b = 0; b < n; ++b) rows[static_cast<size_t>(b)] = boys_flat.data() + b * n;
  std::vector<int> wife(static_cast<size_t>(n)), rank(static_cast<size_t>(n));
  engine.run(rows.data(), wife.data(), rank.data());
  std::vector<int> goods(static_cast<size_t>(n));
  for (int b = 0; b < n; ++b) goods[static_cast<size_t>(b)] = wife[static_cast<size_t>(b)] + 1;
  return AllocationResult{Permutation(std::move(goods)), std::move(rank)};
}

/// Girls' profile in which girl j's k-th choice is congruent to j+k mod n.
inline PreferenceProfile cyclic_girls(int n) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  std::vector<Permutation> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    std::vector<int> row(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) row[static_cast<size_t>(k) - 1] = (j + k - 1) % n + 1;
    rows.push_back(Permutation(std::move(row)));
  }
  return PreferenceProfile(std::move(rows));
}

/// Girls' profile in which every girl uses the identity list; the canonical
/// representative of the shared-list (uniform hashing) class.
inline PreferenceProfile equal_girls(int n) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  std::vector<Permutation> rows(static_cast<size_t>(n), Permutation::identity(n));
  return PreferenceProfile(std::move(rows));
}

/// Totals of the male rank sum over all (n!)^n boys' matrices, under both
/// rank conventions. one_based sums r_k, zero_based sums (r_k - 1).
struct MarriageTotals {
  BigInt one_based = 0;
  BigInt zero_based = 0;
  BigInt instances = 0;

  BigInt of(RankConvention c) const {
    return c == RankConvention::kOneBased ? one_based : zero_based;
  }
  bool operator==(const MarriageTotals&) const = default;
};

namespace detail {

// Sum of male-optimal one-based rank sums for boys' matrix indices in
// [begin, end), mixed-radix over lexicographic row ranks, row 1 most
// significant. Returns the one-based total; zero-based = total - n * count.
inline unsigned long long marriage_total_range(int n, const std::vector<int>& girls_flat,
                                               uint64_t begin, uint64_t end) {
  if (begin >= end) return 0;
  GaleShapleyEngine engine(n);
  engine.set_girls(girls_flat.data());
  const uint64_t f = factorial_u64(n);
  // 0-based permutation table in lexicographic order.
  const std::vector<Permutation> lex = all_permutations(n);
  std::vector<int> perm_table(static_cast<size_t>(f) * static_cast<size_t>(n));
  for (uint64_t i = 0; i < f; ++i)
    for (int j = 1; j <= n; ++j)
      perm_table[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j - 1)] =
          lex[static_cast<size_t>(i)].at(j) - 1;

  std::vector<uint64_t> digits(static_cast<size_t>(n), 0);
  uint64_t rest = begin;
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<size_t>(k)] = rest % f;
    rest /= f;
  }
  std::vector<const int*> rows(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    rows[static_cast<size_t>(k)] =
        perm_table.data() + digits[static_cast<size_t>(k)] * static_cast<uint64_t>(n);

  unsigned long long total = 0;
  for (uint64_t idx = begin; idx < end; ++idx) {
    total += static_cast<unsigned long long>(engine.run(rows.data(), nullptr, nullptr));
    for (int k = n - 1; k >= 0; --k) {
      if (++digits[static_cast<size_t>(k)] < f) {
        rows[static_cast<size_t>(k)] =
            perm_table.data() + digits[static_cast<size_t>(k)] * static_cast<uint64_t>(n);
        break;
      }
      digits[static_cast<size_t>(k)] = 0;
      rows[static_cast<size_t>(k)] = perm_table.data();
    }
  }
  return total;
}

inline unsigned long long marriage_total_parallel(int n, const std::vector<int>& girls_flat,
                                                  uint64_t begin, uint64_t end, int workers) {
  if (workers <= 1 || end - begin < 1024)
    return marriage_total_range(n, girls_flat, begin, end);
  std::vector<unsigned long long> parts(static_cast<size_t>(workers), 0);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(workers));
  const uint64_t span = end - begin;
  for (int w = 0; w < workers; ++w) {
    const uint64_t lo = begin + span * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
    const uint64_t hi =
        begin + span * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(workers);
    threads.emplace_back([&, w, lo, hi] {
      parts[static_cast<size_t>(w)] = marriage_total_range(n, girls_flat, lo, hi);
    });
  }
  for (std::thread& t : threads) t.join();
  unsigned long long total = 0;
  for (unsigned long long part : parts) total += part;
  return total;
}

}  // namespace detail

/// Exhaustive male rank-sum total over all boys' matrices for fixed girls.
/// Desk-scale entry point: requires n <= 4. Use the long-run variant for
/// n = 5.
inline MarriageTotals total_marriage_rank_sum(const PreferenceProfile& girls, int workers = 1) {
  const int n = girls.size();
  if (n > 4)
    throw std::domain_error("exhaustive marriage total requires n <= 4; use the long-run mode");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const uint64_t space = profile_space_size(n);
  const std::vector<int> girls_flat = detail::flatten_zero_based(girls);
  const unsigned long long one_based =
      detail::marriage_total_parallel(n, girls_flat, 0, space, workers);
  MarriageTotals totals;
  totals.one_based = one_based;
  totals.zero_based = BigInt(one_based) - BigInt(space) * n;
  totals.instances = space;
  return totals;
}

/// Long-run controls for the exhaustive totals: chunked enumeration with a
/// JSON checkpoint after every chunk, so a multi-day n = 5 scan can stop and
/// resume with bit-identical results.
struct LongRunOptions {
  std::string checkpoint_path;  // empty = no checkpointing
  uint64_t chunk_size = 100'000'000;
  uint64_t max_chunks = 0;  // 0 = run to completion
  int workers = 1;
};

/// Partial or complete long-run state; complete when next_index == space.
struct LongRunResult {
  MarriageTotals totals;
  uint64_t next_index = 0;
  uint64_t space = 0;
  bool complete() const { return next_index == space; }
};

namespace detail {

inline constexpr int kCheckpointSchemaVersion = 1;

inline nlohmann::ordered_json checkpoint_to_json(const PreferenceProfile& girls,
                                                 uint64_t next_index, uint64_t space,
                                                 unsigned long long partial_one_based) {
  nlohmann::ordered_json j;
  j["schema_version"] = kCheckpointSchemaVersion;
  j["kind"] = "marriage_total_checkpoint";
  j["n"] = girls.size();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int k = 1; k <= girls.size(); ++k) rows.push_back(girls.row(k).values());
  j["girls"] = rows;
  j["instances"] = space;
  j["next_index"] = next_index;
  j["partial_one_based"] = partial_one_based;
  return j;
}

inline void write_checkpoint(const std::string& path, const nlohmann::ordered_json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << j.dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot replace checkpoint: " + path);
}

}  // namespace detail

/// Resumable exhaustive totals. If the checkpoint file exists it must match
/// the requested girls' matrix and the run continues from its saved index;
/// otherwise enumeration starts at zero. Supports n <= 6 index space, which
/// in practice means the n = 5 overnight runs.
inline LongRunResult total_marriage_rank_sum_long(const PreferenceProfile& girls,
                                                  const LongRunOptions& options) {
  const int n = girls.size();
  const uint64_t space = profile_space_size(n);
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (options.chunk_size < 1) throw std::invalid_argument("chunk_size must be >= 1");

  uint64_t next_index = 0;
  unsigned long long partial = 0;
  if (!options.checkpoint_path.empty()) {
    std::ifstream in(options.checkpoint_path);
    if (in) {
      nlohmann::json j;
      in >> j;
      if (j.at("schema_version").get<int>() != detail::kCheckpointSchemaVersion)
        throw std::runtime_error("checkpoint schema version mismatch");
      if (j.at("kind").get<std::string>() != "marriage_total_checkpoint")
        throw std::runtime_error("checkpoint kind mismatch");
      if (j.at("n").get<int>() != n) throw std::runtime_error("checkpoint n mismatch");
      std::vector<std::vector<int>> rows = j.at("girls").get<std::vector<std::vector<int>>>();
      if (validate_profile(rows) != girls)
        throw std::runtime_error("checkpoint girls' matrix mismatch");
      next_index = j.at("next_index").get<uint64_t>();
      partial = j.at("partial_one_based").get<unsigned long long>();
      if (next_index > space) throw std::runtime_error("checkpoint index out of range");
    }
  }

  const std::vector<int> girls_flat = detail::flatten_zero_based(girls);
  uint64_t chunks_done = 0;
  while (next_index < space &&
         (options.max_chunks == 0 || chunks_done < options.max_chunks)) {
    const uint64_t end = std::min(space, next_index + options.chunk_size);
    partial += detail::marriage_total_parallel(n, girls_flat, next_index, end, options.workers);
    next_index = end;
    ++chunks_done;
    if (!options.checkpoint_path.empty())
      detail::write_checkpoint(options.checkpoint_path,
                               detail::checkpoint_to_json(girls, next_index, space, partial));
  }

  LongRunResult result;
  result.next_index = next_index;
  result.space = space;
  result.totals.one_based = partial;
  result.totals.zero_based = BigInt(partial) - BigInt(next_index) * n;
  result.totals.instances = next_index;
  return result;
}

/// Seeded estimate of the mean male rank sum for a fixed girls' matrix, the
/// boys' matrix drawn uniformly per sample. Sample i uses substream
/// mix_seed(seed, i), so any worker split gives identical sums.
struct MarriageMonteCarlo {
  int n = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  BigInt sum_rank_sum = 0;     // one-based
  BigInt sum_rank_sum_sq = 0;  // of one-based sums

  double mean(RankConvention c = RankConvention::kOneBased) const {
    const double one = to_double(Rational(sum_rank_sum, samples));
    return c == RankConvention::kOneBased ? one : one - n;
  }
  double variance() const {
    if (samples < 2) return 0.0;
    return to_double((Rational(sum_rank_sum_sq) - Rational(sum_rank_sum * sum_rank_sum, samples)) /
                     Rational(samples - 1));
  }
  double se_mean() const { return std::sqrt(variance() / static_cast<double>(samples)); }
};

inline MarriageMonteCarlo marriage_monte_carlo(const PreferenceProfile& girls, uint64_t samples,
                                               uint64_t seed, int workers = 1) {
  const int n = girls.size();
  if (samples < 1) throw std::domain_error("samples must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const std::vector<int> girls_flat = detail::flatten_zero_based(girls);

  struct Part {
    unsigned long long sum = 0;
    unsigned __int128 sum_sq = 0;
  };
  std::vector<Part> parts(static_cast<size_t>(workers));
  auto run_range = [&](int w, uint64_t begin, uint64_t end) {
    detail::GaleShapleyEngine engine(n);
    engine.set_girls(girls_flat.data());
    std::vector<int> boys(static_cast<size_t>(n) * static_cast<size_t>(n));
    std::vector<const int*> rows(static_cast<size_t>(n));
    for (int b = 0; b < n; ++b) rows[static_cast<size_t>(b)] = boys.data() + b * n;
    std::vector<int> scratch(static_cast<size_t>(n));
    for (uint64_t i = begin; i < end; ++i) {
      RngStream rng(mix_seed(seed, i));
      for (int b = 0; b < n; ++b) {
        for (int v = 0; v < n; ++v) scratch[static_cast<size_t>(v)] = v;
        for (int v = n - 1; v >= 1; --v) {
          const uint64_t j = rng.below(static_cast<uint64_t>(v) + 1);
          std::swap(scratch[static_cast<size_t>(v)], scratch[j]);
        }
        std::copy(scratch.begin(), scratch.end(), boys.begin() + b * n);
      }
      const unsigned long long s =
          static_cast<unsigned long long>(engine.run(rows.data(), nullptr, nullptr));
      parts[static_cast<size_t>(w)].sum += s;
      parts[static_cast<size_t>(w)].sum_sq += static_cast<unsigned __int128>(s) * s;
    }
  };
  if (workers == 1) {
    run_range(0, 0, samples);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      const uint64_t begin = samples * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
      const uint64_t end =
          samples * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(workers);
      threads.emplace_back(run_range, w, begin, end);
    }
    for (std::thread& t : threads) t.join();
  }

  MarriageMonteCarlo out;
  out.n = n;
  out.samples = samples;
  out.seed = seed;
  for (const Part& part : parts) {
    out.sum_rank_sum += part.sum;
    BigInt sq = static_cast<uint64_t>(part.sum_sq >> 64);
    sq <<= 64;
    sq += static_cast<uint64_t>(part.sum_sq);
    out.sum_rank_sum_sq += sq;
  }
  return out;
}

/// Lexicographically smallest matrix over simultaneous renamings of boys
/// (applied to entries) and girls (permuting rows).
inline PreferenceProfile girls_canonical_form(const PreferenceProfile& girls) {
  const int n = girls.size();
  const std::vector<Permutation> relabels = all_permutations(n);
  std::vector<std::vector<int>> best;
  std::vector<std::vector<int>> candidate(static_cast<size_t>(n),
                                          std::vector<int>(static_cast<size_t>(n)));
  for (const Permutation& alpha : relabels) {    // boy renaming
    for (const Permutation& beta : relabels) {   // girl renaming
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          candidate[static_cast<size_t>(beta.at(j)) - 1][static_cast<size_t>(k) - 1] =
              alpha.at(girls.entry(j, k));
      if (best.empty() || candidate < best) best = candidate;
    }
  }
  std::vector<Permutation> rows;
  rows.reserve(static_cast<size_t>(n));
  for (const std::vector<int>& row : best) rows.push_back(Permutation(row));
  return PreferenceProfile(std::move(rows));
}

/// One isomorphism class of girls' matrices: its canonical representative,
/// orbit size, and the exhaustive rank-sum totals of that representative.
struct ScanClassRecord {
  std::vector<std::vector<int>> girls_rows;  // canonical representative
  uint64_t class_size = 0;
  MarriageTotals totals;
};

/// Full classification of girls' matrices by boy/girl renaming, with the
/// exhaustive male rank-sum total for one representative per class. Classes
/// are sorted by descending zero-based total, ties broken by representative.
struct ScanReport {
  int n = 0;
  uint64_t matrices = 0;  // (n!)^n
  std::vector<ScanClassRecord> classes;
};

namespace detail {

// Relabeling tables flattened to 0-based arrays: maps[i][v] = image of v.
inline std::vector<std::vector<int>> relabel_tables(const std::vector<Permutation>& relabels,
                                                    bool inverted) {
  std::vector<std::vector<int>> tables;
  tables.reserve(relabels.size());
  for (const Permutation& p : relabels) {
    const Permutation use = inverted ? p.inverse() : p;
    std::vector<int> t(static_cast<size_t>(use.size()));
    for (int i = 1; i <= use.size(); ++i) t[static_cast<size_t>(i) - 1] = use.at(i) - 1;
    tables.push_back(std::move(t));
  }
  return tables;
}

// True iff `flat` (row-major, 0-based) is the lexicographically smallest
// member of its orbit under (boy renaming alpha, girl renaming beta). The
// candidate with girls renamed by beta has output row o = alpha applied to
// input row beta^{-1}(o); comparison stops at the first differing entry.
inline bool is_canonical_matrix(int n, const std::vector<int>& flat,
                                const std::vector<std::vector<int>>& alphas,
                                const std::vector<std::vector<int>>& beta_inverses,
                                uint64_t* stabilizer_out) {
  uint64_t stabilizer = 0;
  for (const std::vector<int>& alpha : alphas) {
    for (const std::vector<int>& beta_inv : beta_inverses) {
      int cmp = 0;
      for (int o = 0; o < n && cmp == 0; ++o) {
        const int src = beta_inv[static_cast<size_t>(o)];
        const int* src_row = flat.data() + static_cast<size_t>(src) * static_cast<size_t>(n);
        const int* out_row = flat.data() + static_cast<size_t>(o) * static_cast<size_t>(n);
        for (int k = 0; k < n; ++k) {
          const int cv = alpha[static_cast<size_t>(src_row[k])];
          if (cv != out_row[k]) {
            cmp = cv < out_row[k] ? -1 : 1;
            break;
          }
        }
      }
      if (cmp < 0) return false;
      if (cmp == 0) ++stabilizer;
    }
  }
  if (stabilizer_out) *stabilizer_out = stabilizer;
  return true;
}

}  // namespace detail

inline ScanReport conjecture_scan(int n, int workers = 1) {
  if (n < 1 || n > 4) throw std::domain_error("conjecture scan supported only for n <= 4");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const std::vector<Permutation> relabels = all_permutations(n);
  const std::vector<std::vector<int>> alphas = detail::relabel_tables(relabels, false);
  const std::vector<std::vector<int>> beta_inverses = detail::relabel_tables(relabels, true);
  const uint64_t f = factorial_u64(n);
  const uint64_t space = profile_space_size(n);
  const uint64_t group = f * f;

  // Pass 1: canonical representatives and their orbit sizes, partitioned by
  // index range and merged in range order so the class list is deterministic.
  std::vector<std::vector<int>> canonicals;  // flat 0-based matrices
  std::vector<uint64_t> orbit_sizes;
  {
    const std::vector<Permutation> lex = all_permutations(n);
    const int nthreads = std::max(1, workers);
    std::vector<std::vector<std::vector<int>>> found(static_cast<size_t>(nthreads));
    std::vector<std::vector<uint64_t>> found_orbits(static_cast<size_t>(nthreads));
    std::vector<std::thread> threads;
    for (int w = 0; w < nthreads; ++w) {
      const uint64_t begin = space * static_cast<uint64_t>(w) / static_cast<uint64_t>(nthreads);
      const uint64_t end =
          space * (static_cast<uint64_t>(w) + 1) / static_cast<uint64_t>(nthreads);
      threads.emplace_back([&, w, begin, end] {
        std::vector<uint64_t> digits(static_cast<size_t>(n), 0);
        std::vector<int> flat(static_cast<size_t>(n) * static_cast<size_t>(n));
        for (uint64_t idx = begin; idx < end; ++idx) {
          uint64_t rest = idx;
          for (int k = n - 1; k >= 0; --k) {
            digits[static_cast<size_t>(k)] = rest % f;
            rest /= f;
          }
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
              flat[static_cast<size_t>(k) * static_cast<size_t>(n) + static_cast<size_t>(j)] =
                  lex[digits[static_cast<size_t>(k)]].at(j + 1) - 1;
          uint64_t stabilizer = 0;
          if (detail::is_canonical_matrix(n, flat, alphas, beta_inverses, &stabilizer)) {
            found[static_cast<size_t>(w)].push_back(flat);
            found_orbits[static_cast<size_t>(w)].push_back(group / stabilizer);
          }
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (int w = 0; w < nthreads; ++w) {
      canonicals.insert(canonicals.end(), found[static_cast<size_t>(w)].begin(),
                        found[static_cast<size_t>(w)].end());
      orbit_sizes.insert(orbit_sizes.end(), found_orbits[static_cast<size_t>(w)].begin(),
                         found_orbits[static_cast<size_t>(w)].end());
    }
  }

  // Pass 2: exhaustive totals per class, parallel across classes.
  std::vector<MarriageTotals> totals(canonicals.size());
  {
    std::vector<std::thread> threads;
    std::atomic<size_t> cursor{0};
    const int nthreads = std::min<int>(workers, static_cast<int>(canonicals.size()));
    for (int w = 0; w < nthreads; ++w) {
      threads.emplace_back([&] {
        for (;;) {
          const size_t c = cursor.fetch_add(1);
          if (c >= canonicals.size()) break;
          const unsigned long long one_based =
              detail::marriage_total_range(n, canonicals[c], 0, space);
          totals[c].one_based = one_based;
          totals[c].zero_based = BigInt(one_based) - BigInt(space) * n;
          totals[c].instances = space;
        }
      });
    }
    for (std::thread& t : threads) t.join();
  }

  ScanReport report;
  report.n = n;
  report.matrices = space;
  uint64_t covered = 0;
  for (size_t c = 0; c < canonicals.size(); ++c) {
    ScanClassRecord rec;
    rec.girls_rows.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        rec.girls_rows[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            canonicals[c][static_cast<size_t>(j) * static_cast<size_t>(n) +
                          static_cast<size_t>(k)] + 1;
    rec.class_size = orbit_sizes[c];
    rec.totals = totals[c];
    covered += orbit_sizes[c];
    report.classes.push_back(std::move(rec));
  }
  if (covered != space) throw std::logic_error("orbit sizes do not cover the matrix space");
  std::sort(report.classes.begin(), report.classes.end(),
            [](const ScanClassRecord& a, const ScanClassRecord& b) {
              if (a.totals.zero_based != b.totals.zero_based)
                return a.totals.zero_based > b.totals.zero_based;
              return a.girls_rows < b.girls_rows;
            });
  return report;
}

}  // namespace stalloc
