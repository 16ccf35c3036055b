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

#ifndef BNOL_RNG_HPP
#define BNOL_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace bnol {

// SplitMix64 finalizer. Used for seed derivation only.
uint64_t mix64(uint64_t z);

// FNV-1a over a byte string. Stage tags hash through this.
uint64_t fnv1a64(std::string_view s);

// Stream-splitting scheme: every random stream in the system is derived from
// the one experiment seed as
//     substream_seed(root, tag, index) = mix64(mix64(root ^ fnv1a64(tag)) ^ index)
// with a unique (tag, index) per stage. Independent stages never share a
// stream; reruns with the same root seed replay identically.
uint64_t substream_seed(uint64_t root_seed, std::string_view tag,
                        uint64_t index = 0);

// Deterministic generator. The engine (mt19937_64) and every mapping below
// are fully specified, so identical seeds give identical draws on any
// platform; none of the std <random> distributions are used.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng substream(uint64_t root_seed, std::string_view tag,
                       uint64_t index = 0) {
    return Rng(substream_seed(root_seed, tag, index));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling, exact.
  int uniform_int(int n);

  // Index i with probability exp(logits[i]) / Σ_j exp(logits[j]).
  int categorical_from_log(std::span<const double> logits);

  // Exp(1) variate.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bnol

#endif  // BNOL_RNG_HPP
