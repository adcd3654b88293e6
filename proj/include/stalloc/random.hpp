// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "stalloc/profile.hpp"

namespace stalloc {

/// splitmix64 stream. Chosen over the std engines/distributions because the
/// output sequence is pinned by the algorithm itself, which keeps seeded runs
/// byte-identical across standard libraries and platforms.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw from {0, ..., bound-1}, unbiased via rejection of the
  /// partial top block.
  uint64_t below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    uint64_t x;
    do {
      x = next();
    } while (x < threshold);
    return x % bound;
  }

 private:
  uint64_t state_;
};

/// Derives an independent stream seed for a numbered substream, so work can
/// be partitioned arbitrarily without changing any per-item draw.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  RngStream mixer(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return mixer.next();
}

/// Unbiased Fisher-Yates shuffle of {1..n}.
inline Permutation random_permutation(int n, RngStream& rng) {
  std::vector<int> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i + 1;
  for (int i = n - 1; i >= 1; --i) {
    const uint64_t j = rng.below(static_cast<uint64_t>(i) + 1);
    std::swap(v[static_cast<size_t>(i)], v[j]);
  }
  return Permutation(std::move(v));
}

/// Profile whose rows are independent uniform random permutations.
inline PreferenceProfile random_profile(int n, RngStream& rng) {
  std::vector<Permutation> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) rows.push_back(random_permutation(n, rng));
  return PreferenceProfile(std::move(rows));
}

}  // namespace stalloc
