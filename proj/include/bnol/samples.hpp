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

#ifndef BNOL_SAMPLES_HPP
#define BNOL_SAMPLES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bnol {

// Rows of discrete observations over n variables with a common arity k.
// Values are 0-based in memory and 1-based in CSV.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(int num_vars, int arity);

  // CSV format: header "x1,...,xn", then one row per sample with cells in
  // 1..k. When `arity` is absent it is inferred as the largest cell seen.
  static SampleSet from_csv(std::istream& in,
                            std::optional<int> arity = std::nullopt);
  static SampleSet from_file(const std::string& path,
                             std::optional<int> arity = std::nullopt);
  void to_csv(std::ostream& out) const;
  void to_file(const std::string& path) const;

  void append(std::span<const int> row);

  int num_vars() const { return n_; }
  int arity() const { return k_; }
  int num_rows() const { return n_ == 0 ? 0 : int(data_.size()) / n_; }
  std::span<const int> row(int t) const {
    return std::span<const int>(data_.data() + size_t(t) * n_, size_t(n_));
  }
  int value(int t, int v) const { return data_[size_t(t) * n_ + v]; }

  // Rows [begin, end) as a new set.
  SampleSet slice(int begin, int end) const;

  // Stable content fingerprint covering shape and every cell.
  uint64_t digest() const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> data_;
};

}  // namespace bnol

#endif  // BNOL_SAMPLES_HPP
