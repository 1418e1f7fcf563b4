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

#include "chem/parametrization.hpp"

#include <cmath>
#include <sstream>

#include "chem/errors.hpp"
#include "chem/radix_cache.hpp"

namespace chem {
namespace {

std::size_t top_index_u64(std::uint64_t m, unsigned radix) {
  std::size_t k = 0;
  std::uint64_t rest = m / radix;
  while (rest > 0) {
    rest /= radix;
    ++k;
  }
  return k;
}

void check_radix(unsigned radix) {
  if (radix < 2) throw ValidationError("radix must be at least 2");
}

}  // namespace

double predicted_cost(unsigned radix, std::uint64_t m) {
  check_radix(radix);
  if (m < 2) throw ValidationError("predicted_cost needs m >= 2");
  return (radix - 1.0) * std::log(static_cast<double>(m) + 1.0) /
             std::log(static_cast<double>(radix)) -
         1.0;
}

std::uint64_t measured_cost(unsigned radix, std::uint64_t m) {
  check_radix(radix);
  if (m > kCostScanBudget) {
    throw RangeError("m = " + std::to_string(m) + " exceeds the scan budget of " +
                     std::to_string(kCostScanBudget));
  }
  if (m == 0) return 0;
  const std::size_t k = top_index_u64(m, radix);
  std::uint64_t worst = 0;
  for (std::uint64_t x = 1; x <= m; ++x) {
    const std::uint64_t c = addition_count(x, radix, k);
    if (c > worst) worst = c;
  }
  return worst;
}

unsigned optimal_radix(std::uint64_t m, RadixRange range) {
  if (range.first < 2 || range.last < range.first) {
    throw ValidationError("radix range must start at 2 or above and be non-empty");
  }
  unsigned best = range.first;
  double best_cost = predicted_cost(best, m);
  for (unsigned r = range.first + 1; r <= range.last; ++r) {
    const double c = predicted_cost(r, m);
    if (c < best_cost) {
      best = r;
      best_cost = c;
    }
  }
  return best;
}

bool monotonicity_check(std::uint64_t m, unsigned r_max) {
  for (unsigned r = 2; r < r_max; ++r) {
    if (predicted_cost(r + 1, m) < predicted_cost(r, m)) return false;
  }
  return true;
}

double cost_derivative_sign(double radix) {
  return radix * std::log(radix) - radix + 1.0;
}

RadixCostProfile cost_profile(unsigned radix, std::uint64_t m) {
  RadixCostProfile p;
  p.radix = radix;
  p.max_plain = m;
  p.top_index = top_index_u64(m, radix);
  p.predicted_worst_cost = predicted_cost(radix, m);
  p.measured_worst_cost = measured_cost(radix, m);
  return p;
}

std::string cost_table_csv(std::uint64_t m, RadixRange range) {
  std::ostringstream out;
  out << "radix,max_plain,top_index,predicted,measured\n";
  out.precision(10);
  for (unsigned r = range.first; r <= range.last; ++r) {
    const RadixCostProfile p = cost_profile(r, m);
    out << p.radix << ',' << p.max_plain << ',' << p.top_index << ','
        << p.predicted_worst_cost << ',' << p.measured_worst_cost << '\n';
  }
  return out.str();
}

}  // namespace chem
