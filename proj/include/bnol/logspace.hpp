// Copyright 2026 The bnol Authors.
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

#ifndef BNOL_LOGSPACE_HPP
#define BNOL_LOGSPACE_HPP

#include <cmath>
#include <limits>
#include <span>

namespace bnol {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), stable for any mix of finite and -inf arguments.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;  // also covers a == b == -inf
  return a + std::log1p(std::exp(b - a));
}

// log Σ_i e^{xs[i]}; -inf on an empty span.
inline double log_sum_exp(std::span<const double> xs) {
  double max_arg = kNegInf;
  for (double x : xs) max_arg = std::max(max_arg, x);
  if (max_arg == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - max_arg);
  return max_arg + std::log(sum);
}

// Incremental log-sum-exp accumulator.
class LogSumAccumulator {
 public:
  void add(double log_term) { total_ = log_add(total_, log_term); }
  double log_total() const { return total_; }

 private:
  double total_ = kNegInf;
};

}  // namespace bnol

#endif  // BNOL_LOGSPACE_HPP
