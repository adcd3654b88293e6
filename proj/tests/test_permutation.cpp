// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "stalloc/permutation.hpp"
#include "stalloc/random.hpp"

using namespace stalloc;

TEST_CASE("permutation validation", "[permutation]") {
  CHECK_NOTHROW(Permutation({2, 1, 3}));
  CHECK_NOTHROW(Permutation({1}));
  CHECK_THROWS_AS(Permutation({1, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation(std::vector<int>{}), std::invalid_argument);
  CHECK(is_permutation_values({3, 1, 2}));
  CHECK_FALSE(is_permutation_values({3, 3, 1}));
}

TEST_CASE("inverse and composition", "[permutation]") {
  const Permutation p({5, 3, 4, 9, 1, 8, 2, 7, 6});
  CHECK(p.compose(p.inverse()) == Permutation::identity(9));
  CHECK(p.inverse().compose(p) == Permutation::identity(9));

  RngStream rng(20260810);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const Permutation q = random_permutation(n, rng);
    CHECK(q.compose(q.inverse()) == Permutation::identity(n));
  }
}

TEST_CASE("lexicographic rank and unrank invert each other", "[permutation]") {
  const std::vector<Permutation> all = all_permutations(4);
  REQUIRE(all.size() == 24);
  CHECK(all.front() == Permutation::identity(4));
  CHECK(all.back() == Permutation({4, 3, 2, 1}));
  for (uint64_t r = 0; r < 24; ++r) {
    CHECK(permutation_lex_rank(all[r]) == r);
    CHECK(nth_permutation(4, r) == all[r]);
  }
  CHECK_THROWS_AS(nth_permutation(3, 6), std::domain_error);
}

TEST_CASE("csv parsing", "[permutation]") {
  CHECK(parse_permutation_csv("5,3,4,9,1,8,2,7,6") ==
        Permutation({5, 3, 4, 9, 1, 8, 2, 7, 6}));
  CHECK(parse_permutation_csv("1") == Permutation({1}));
  CHECK_THROWS_AS(parse_permutation_csv("1,2,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation_csv("1,1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation_csv(""), std::invalid_argument);
}

TEST_CASE("to_string", "[permutation]") {
  CHECK(Permutation({2, 1, 3}).to_string() == "2 1 3");
}
