// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "stalloc/profile.hpp"

namespace stalloc::testutil {

/// The running three-trader example: rows 213 / 312 / 231. Its stable
/// allocation is (1,3,2) and its locally optimal allocations are 213, 231
/// and 132.
inline PreferenceProfile three_trader_profile() {
  return validate_profile({{2, 1, 3}, {3, 1, 2}, {2, 3, 1}});
}

/// Nine-trader fixture whose hashing under priority (5,3,4,9,1,8,2,7,6)
/// allocates (3,4,1,5,9,6,8,7,2). Only the prefixes up to each allocated
/// good matter; these rows complete each prefix in ascending order, and the
/// fixture tests prove the completion is immaterial by comparing against the
/// descending completion below.
inline PreferenceProfile nine_trader_profile() {
  return validate_profile({{3, 1, 2, 4, 5, 6, 7, 8, 9},
                           {4, 1, 2, 3, 5, 6, 7, 8, 9},
                           {1, 2, 3, 4, 5, 6, 7, 8, 9},
                           {1, 5, 2, 3, 4, 6, 7, 8, 9},
                           {9, 1, 2, 3, 4, 5, 6, 7, 8},
                           {6, 1, 2, 3, 4, 5, 7, 8, 9},
                           {5, 3, 8, 1, 2, 4, 6, 7, 9},
                           {9, 7, 1, 2, 3, 4, 5, 6, 8},
                           {2, 1, 3, 4, 5, 6, 7, 8, 9}});
}

/// Same prefixes as nine_trader_profile, completed in descending order.
inline PreferenceProfile nine_trader_profile_desc() {
  return validate_profile({{3, 9, 8, 7, 6, 5, 4, 2, 1},
                           {4, 9, 8, 7, 6, 5, 3, 2, 1},
                           {1, 9, 8, 7, 6, 5, 4, 3, 2},
                           {1, 5, 9, 8, 7, 6, 4, 3, 2},
                           {9, 8, 7, 6, 5, 4, 3, 2, 1},
                           {6, 9, 8, 7, 5, 4, 3, 2, 1},
                           {5, 3, 8, 9, 7, 6, 4, 2, 1},
                           {9, 7, 8, 6, 5, 4, 3, 2, 1},
                           {2, 9, 8, 7, 6, 5, 4, 3, 1}});
}

inline std::string data_path(const std::string& name) {
  return std::string(STALLOC_TEST_DATA_DIR) + "/" + name;
}

}  // namespace stalloc::testutil
