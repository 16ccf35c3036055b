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

#include "bnol/samples.hpp"

#include <fstream>
#include <sstream>

#include "bnol/errors.hpp"
#include "bnol/rng.hpp"

namespace bnol {

SampleSet::SampleSet(int num_vars, int arity) : n_(num_vars), k_(arity) {
  if (num_vars < 1) throw DomainError("sample set needs at least one variable");
  if (arity < 2) throw DomainError("arity must be at least 2");
}

void SampleSet::append(std::span<const int> row) {
  if (int(row.size()) != n_) throw DomainError("row width mismatch");
  for (int x : row)
    if (x < 0 || x >= k_) throw DomainError("cell value out of range");
  data_.insert(data_.end(), row.begin(), row.end());
}

SampleSet SampleSet::from_csv(std::istream& in, std::optional<int> arity) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("samples: missing header");
  std::vector<std::string> fields;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
  }
  const int n = int(fields.size());
  for (int i = 0; i < n; ++i)
    if (fields[i] != "x" + std::to_string(i + 1))
      throw IoError("samples: header must be x1,...,xn");

  std::vector<int> cells;
  int max_cell = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int width = 0;
    while (std::getline(ss, cell, ',')) {
      size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(cell, &used);
      } catch (const std::exception&) {
        throw IoError("samples: non-numeric cell '" + cell + "'");
      }
      if (used != cell.size() || v < 1)
        throw IoError("samples: cell values must be positive integers");
      cells.push_back(v - 1);
      max_cell = std::max(max_cell, v);
      ++width;
    }
    if (width != n) throw IoError("samples: ragged row");
    ++rows;
  }
  const int k = arity.value_or(std::max(max_cell, 2));
  if (max_cell > k) throw IoError("samples: cell value exceeds arity");
  SampleSet s(n, k);
  for (int t = 0; t < rows; ++t)
    s.append(std::span<const int>(cells.data() + size_t(t) * n, size_t(n)));
  return s;
}

SampleSet SampleSet::from_file(const std::string& path,
                               std::optional<int> arity) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return from_csv(in, arity);
}

void SampleSet::to_csv(std::ostream& out) const {
  for (int i = 0; i < n_; ++i) out << (i ? "," : "") << 'x' << (i + 1);
  out << '\n';
  for (int t = 0; t < num_rows(); ++t) {
    for (int v = 0; v < n_; ++v) out << (v ? "," : "") << (value(t, v) + 1);
    out << '\n';
  }
}

void SampleSet::to_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  to_csv(out);
  if (!out) throw IoError("failed writing " + path);
}

SampleSet SampleSet::slice(int begin, int end) const {
  if (begin < 0 || end < begin || end > num_rows())
    throw DomainError("sample slice out of range");
  SampleSet s(n_, k_);
  for (int t = begin; t < end; ++t) s.append(row(t));
  return s;
}

uint64_t SampleSet::digest() const {
  std::string bytes;
  bytes.reserve(data_.size() * 3 + 16);
  bytes += std::to_string(n_) + "x" + std::to_string(k_) + ";";
  for (int x : data_) {
    bytes += std::to_string(x);
    bytes += ',';
  }
  return fnv1a64(bytes);
}

}  // namespace bnol
