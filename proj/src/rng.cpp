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

#include "bnol/rng.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bnol/logspace.hpp"

namespace bnol {

uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t substream_seed(uint64_t root_seed, std::string_view tag,
                        uint64_t index) {
  return mix64(mix64(root_seed ^ fnv1a64(tag)) ^ index);
}

int Rng::uniform_int(int n) {
  assert(n > 0);
  const uint64_t un = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

int Rng::categorical_from_log(std::span<const double> logits) {
  if (logits.empty())
    throw std::invalid_argument("categorical over empty support");
  double max_arg = kNegInf;
  for (double l : logits) max_arg = std::max(max_arg, l);
  if (max_arg == kNegInf)
    throw std::invalid_argument("categorical with all-zero weights");
  double total = 0.0;
  std::vector<double> cum(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    total += std::exp(logits[i] - max_arg);
    cum[i] = total;
  }
  const double u = uniform() * total;
  for (size_t i = 0; i + 1 < cum.size(); ++i) {
    if (u < cum[i]) return static_cast<int>(i);
  }
  return static_cast<int>(cum.size() - 1);
}

}  // namespace bnol
