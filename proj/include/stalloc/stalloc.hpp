// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stalloc/allocation.hpp"
#include "stalloc/bijection.hpp"
#include "stalloc/enumeration.hpp"
#include "stalloc/exact_stats.hpp"
#include "stalloc/marriage.hpp"
#include "stalloc/monte_carlo.hpp"
#include "stalloc/permutation.hpp"
#include "stalloc/polynomial.hpp"
#include "stalloc/profile.hpp"
#include "stalloc/random.hpp"
#include "stalloc/rank_distribution.hpp"
#include "stalloc/rational.hpp"
#include "stalloc/stability.hpp"
