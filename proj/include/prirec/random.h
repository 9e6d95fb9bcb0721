// Copyright 2026 The PriRec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random streams. Every random decision in the library is drawn from
// a substream derived from one master seed plus a path of integer tags, so
// that runs are reproducible and independent consumers never share state.

#ifndef PRIREC_RANDOM_H_
#define PRIREC_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace prirec {

using Rng = std::mt19937_64;

// Tags naming the top-level consumers of randomness.
enum class StreamTag : std::uint64_t {
  kInitInteractionModel = 1,
  kEpochShuffle = 2,
  kDgdShares = 3,
  kAggregationSetup = 4,
  kLdpPerturbation = 5,
  kRandomGraph = 6,
  kSplit = 7,
  kNegativeSampling = 8,
  kSynthetic = 9,
  kTestHarness = 10,
};

// SplitMix64 finalizer; a bijection on 64-bit words with good avalanche.
std::uint64_t Mix64(std::uint64_t x);

// Folds `path` into `seed`. Distinct paths give statistically independent
// seeds; the same path always gives the same seed.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> path);

inline std::uint64_t DeriveSeed(std::uint64_t seed, StreamTag tag,
                                std::initializer_list<std::uint64_t> path) {
  return DeriveSeed(DeriveSeed(seed, {static_cast<std::uint64_t>(tag)}), path);
}

// Constructs a generator for the substream at `path`.
inline Rng MakeStream(std::uint64_t seed, StreamTag tag,
                      std::initializer_list<std::uint64_t> path = {}) {
  return Rng(DeriveSeed(seed, tag, path));
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace prirec

#endif  // PRIREC_RANDOM_H_
