// Copyright 2026 The CHEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chem {

// Largest m measured_cost will scan exhaustively.
inline constexpr std::uint64_t kCostScanBudget = std::uint64_t{1} << 24;

/// Worst-case digit-join cost of radix r over plaintexts [0, m].
struct RadixCostProfile {
  unsigned radix = 2;
  std::uint64_t max_plain = 0;
  std::size_t top_index = 0;     // floor(log_r m)
  double predicted_worst_cost = 0;
  std::uint64_t measured_worst_cost = 0;
};

struct RadixRange {
  unsigned first = 2;
  unsigned last = 2;  // inclusive
};

// (r - 1) * ln(m + 1) / ln(r) - 1. Requires r >= 2, m >= 2.
double predicted_cost(unsigned radix, std::uint64_t m);

// max over x in (0, m] of addition_count(x, r, floor(log_r m)); 0 for m = 0.
// Throws RangeError when m exceeds kCostScanBudget.
std::uint64_t measured_cost(unsigned radix, std::uint64_t m);

// Radix minimizing predicted_cost over the range; ties go to the smaller one.
unsigned optimal_radix(std::uint64_t m, RadixRange range);

// predicted_cost(r + 1, m) >= predicted_cost(r, m) for every r in [2, r_max).
bool monotonicity_check(std::uint64_t m, unsigned r_max);

// r ln r - r + 1; the sign of f'(r).
double cost_derivative_sign(double radix);

RadixCostProfile cost_profile(unsigned radix, std::uint64_t m);

// "radix,max_plain,top_index,predicted,measured" rows for r in range.
std::string cost_table_csv(std::uint64_t m, RadixRange range);

}  // namespace chem
