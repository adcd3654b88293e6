// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <sstream>

#include "stalloc/allocation.hpp"
#include "stalloc/enumeration.hpp"
#include "stalloc/profile.hpp"
#include "stalloc/random.hpp"
#include "stalloc/stability.hpp"
#include "testutil.hpp"

using namespace stalloc;
using stalloc::testutil::three_trader_profile;

TEST_CASE("validate_profile accepts and rejects", "[alloc_core]") {
  const PreferenceProfile p = validate_profile({{2, 1, 3}, {3, 1, 2}, {2, 3, 1}});
  CHECK(p.size() == 3);
  CHECK(p.entry(1, 1) == 2);
  CHECK(p.rank_of(3, 1) == 3);
  CHECK(p.prefers(1, 2, 3));

  CHECK(validate_profile({{1}}).size() == 1);
  CHECK_THROWS_AS(validate_profile({{1, 1, 3}, {3, 1, 2}, {2, 3, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_profile({{1, 2}, {2, 1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_profile({}), std::invalid_argument);
}

TEST_CASE("profile text format round-trips and rejects trailing data", "[alloc_core]") {
  const std::string text = "3\n2 1 3\n3 1 2\n2 3 1\n";
  std::istringstream in(text);
  const PreferenceProfile p = parse_profile(in);
  CHECK(p == three_trader_profile());
  CHECK(format_profile(p) == text);

  std::istringstream trailing("1\n1\nextra");
  CHECK_THROWS_AS(parse_profile(trailing), std::invalid_argument);
  std::istringstream truncated("2\n1 2\n");
  CHECK_THROWS_AS(parse_profile(truncated), std::invalid_argument);
  std::istringstream zero("0\n");
  CHECK_THROWS_AS(parse_profile(zero), std::invalid_argument);
}

TEST_CASE("stable allocation on the three-trader fixture", "[alloc_core]") {
  const AllocationResult result = stable_allocation(three_trader_profile());
  CHECK(result.goods == Permutation({1, 3, 2}));
  CHECK(result.ranks == std::vector<int>{2, 1, 1});
}

TEST_CASE("stable allocation resolves all-self-first profiles instantly", "[alloc_core]") {
  // every trader ranks his own good first
  const PreferenceProfile p = validate_profile(
      {{1, 2, 3, 4}, {2, 1, 3, 4}, {3, 1, 2, 4}, {4, 1, 2, 3}});
  const AllocationResult result = stable_allocation(p);
  CHECK(result.goods == Permutation::identity(4));
  CHECK(result.ranks == std::vector<int>{1, 1, 1, 1});

  const AllocationResult single = stable_allocation(validate_profile({{1}}));
  CHECK(single.goods == Permutation({1}));
  CHECK(single.ranks == std::vector<int>{1});
}

TEST_CASE("stable allocation on the nine-trader fixture", "[alloc_core]") {
  const Permutation expected({3, 4, 1, 5, 9, 6, 8, 7, 2});
  CHECK(stable_allocation(stalloc::testutil::nine_trader_profile()).goods == expected);
  // The algorithm never reads past each allocated good, so completing the
  // prefixes in a different order must not change anything.
  CHECK(stable_allocation(stalloc::testutil::nine_trader_profile_desc()).goods == expected);
}

TEST_CASE("n=2 exhaustive rank sums", "[alloc_core]") {
  const std::vector<Permutation> lex = all_permutations(2);
  std::vector<int> sums;
  int total = 0;
  for (uint64_t idx = 0; idx < 4; ++idx) {
    const AllocationResult result = stable_allocation(profile_from_index(2, idx, lex));
    const int s = result.ranks[0] + result.ranks[1];
    sums.push_back(s);
    total += s;
  }
  CHECK(sums == std::vector<int>{3, 2, 2, 3});
  CHECK(total == 10);
}

TEST_CASE("introduce-order tie-break does not change the allocation", "[alloc_core]") {
  const std::vector<Permutation> lex3 = all_permutations(3);
  for (uint64_t idx = 0; idx < 216; ++idx) {
    const PreferenceProfile p = profile_from_index(3, idx, lex3);
    const AllocationResult a = stable_allocation(p, IntroducePolicy::kSmallestIndex);
    CHECK(stable_allocation(p, IntroducePolicy::kLargestIndex).goods == a.goods);
    CHECK(stable_allocation(p, IntroducePolicy::kRotating).goods == a.goods);
  }
  RngStream rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const PreferenceProfile p = random_profile(n, rng);
    const AllocationResult a = stable_allocation(p, IntroducePolicy::kSmallestIndex);
    CHECK(stable_allocation(p, IntroducePolicy::kLargestIndex).goods == a.goods);
    CHECK(stable_allocation(p, IntroducePolicy::kRotating).goods == a.goods);
  }
}

TEST_CASE("uniform hashing examples", "[alloc_core]") {
  const PreferenceProfile p = three_trader_profile();
  CHECK(uniform_hash_allocation(p, Permutation::identity(3)).goods == Permutation({2, 3, 1}));

  const AllocationResult single =
      uniform_hash_allocation(validate_profile({{1}}), Permutation({1}));
  CHECK(single.goods == Permutation({1}));
  CHECK(single.ranks == std::vector<int>{1});

  const Permutation pi({5, 3, 4, 9, 1, 8, 2, 7, 6});
  const Permutation circled({3, 4, 1, 5, 9, 6, 8, 7, 2});
  CHECK(uniform_hash_allocation(stalloc::testutil::nine_trader_profile(), pi).goods == circled);
  CHECK(uniform_hash_allocation(stalloc::testutil::nine_trader_profile_desc(), pi).goods ==
        circled);
}

TEST_CASE("shuffle_profile semantics", "[alloc_core]") {
  const PreferenceProfile p = three_trader_profile();
  CHECK(shuffle_profile(p, Permutation::identity(3)) == p);

  // sigma = (2,1,3): trader 2 uses the old row 1, trader 1 the old row 2.
  const PreferenceProfile shuffled = shuffle_profile(p, Permutation({2, 1, 3}));
  CHECK(shuffled.row(2) == Permutation({2, 1, 3}));
  CHECK(shuffled.row(1) == Permutation({3, 1, 2}));
  CHECK(shuffled.row(3) == Permutation({2, 3, 1}));

  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const PreferenceProfile q = random_profile(n, rng);
    const Permutation sigma = random_permutation(n, rng);
    CHECK(shuffle_profile(shuffle_profile(q, sigma), sigma.inverse()) == q);
    // output row sigma(k) equals input row k
    for (int k = 1; k <= n; ++k)
      CHECK(shuffle_profile(q, sigma).row(sigma.at(k)) == q.row(k));
  }
}

TEST_CASE("core check on the three-trader fixture", "[alloc_core]") {
  const PreferenceProfile p = three_trader_profile();
  CHECK(is_core_allocation(p, Permutation({1, 3, 2})));
  CHECK_FALSE(is_core_allocation(p, Permutation({2, 1, 3})));  // {2,3} swap blocks
  CHECK_FALSE(is_core_allocation(p, Permutation({2, 3, 1})));
  CHECK_THROWS_AS(is_core_allocation(random_profile_for_bound_test(), Permutation::identity(7)),
                  std::domain_error);
}

TEST_CASE("local optimality check", "[alloc_core]") {
  const PreferenceProfile p = three_trader_profile();
  // exactly three of the six allocations pass with the grand coalition
  const std::vector<Permutation> all = all_permutations(3);
  std::vector<Permutation> locally_optimal;
  for (const Permutation& g : all)
    if (is_locally_optimal(p, g)) locally_optimal.push_back(g);
  CHECK(locally_optimal == std::vector<Permutation>{Permutation({1, 3, 2}),
                                                    Permutation({2, 1, 3}),
                                                    Permutation({2, 3, 1})});
  CHECK_FALSE(is_locally_optimal(p, Permutation({3, 1, 2})));
  CHECK(is_locally_optimal(validate_profile({{1}}), Permutation({1})));
}

TEST_CASE("priority reconstruction", "[alloc_core]") {
  const PreferenceProfile p = three_trader_profile();
  const Permutation g({1, 3, 2});
  const Permutation pi = priority_reconstruction(p, g);
  CHECK(uniform_hash_allocation(p, pi).goods == g);
  // trader 3 must come before trader 1
  int pos1 = 0, pos3 = 0;
  for (int i = 1; i <= 3; ++i) {
    if (pi.at(i) == 1) pos1 = i;
    if (pi.at(i) == 3) pos3 = i;
  }
  CHECK(pos3 < pos1);

  CHECK(priority_reconstruction(validate_profile({{1}}), Permutation({1})) == Permutation({1}));
  CHECK_THROWS_AS(priority_reconstruction(p, Permutation({3, 1, 2})), std::invalid_argument);

  RngStream rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const PreferenceProfile q = random_profile(n, rng);
    const Permutation pi0 = random_permutation(n, rng);
    const Permutation goods = uniform_hash_allocation(q, pi0).goods;
    const Permutation rebuilt = priority_reconstruction(q, goods);
    CHECK(uniform_hash_allocation(q, rebuilt).goods == goods);
  }
}

TEST_CASE("stable allocation lands in the core", "[alloc_core]") {
  RngStream rng(123);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const PreferenceProfile p = random_profile(n, rng);
    const AllocationResult result = stable_allocation(p);
    CHECK(is_core_allocation(p, result.goods));
    for (int k = 1; k <= n; ++k)  // rank consistency
      CHECK(p.entry(k, result.ranks[static_cast<size_t>(k) - 1]) == result.goods.at(k));
  }
}

TEST_CASE("uniqueness: exactly one core allocation per profile at n=3", "[alloc_core]") {
  const std::vector<Permutation> lex3 = all_permutations(3);
  for (uint64_t idx = 0; idx < 216; ++idx) {
    const PreferenceProfile p = profile_from_index(3, idx, lex3);
    const Permutation stable = stable_allocation(p).goods;
    int core_count = 0;
    for (const Permutation& g : lex3) {
      const bool core = is_core_allocation(p, g);
      if (core) {
        ++core_count;
        CHECK(g == stable);
        CHECK(is_locally_optimal(p, g));  // core implies grand-coalition optimality
      }
    }
    CHECK(core_count == 1);
  }
}

TEST_CASE("hash allocations are locally optimal", "[alloc_core]") {
  RngStream rng(321);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const PreferenceProfile p = random_profile(n, rng);
    const Permutation pi = random_permutation(n, rng);
    const AllocationResult result = uniform_hash_allocation(p, pi);
    CHECK(is_locally_optimal(p, result.goods));
    for (int k = 1; k <= n; ++k)
      CHECK(p.entry(k, result.ranks[static_cast<size_t>(k) - 1]) == result.goods.at(k));
  }
}
