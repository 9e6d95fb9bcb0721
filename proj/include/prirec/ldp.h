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

// Binary randomized response and unbiased count estimation, used to derive
// POI popularity features from perturbed user-POI interaction bits.

#ifndef PRIREC_LDP_H_
#define PRIREC_LDP_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "prirec/random.h"

namespace prirec {

using UserId = std::int64_t;
using ItemId = std::int64_t;

// Reports 1 with probability 1/(e^eps + 1) + y * (e^eps - 1)/(e^eps + 1).
class RandomizedResponse {
 public:
  static constexpr double kDefaultEpsilon = 1.0;

  // Throws ArgumentError unless epsilon is finite and > 0.
  explicit RandomizedResponse(double epsilon = kDefaultEpsilon);

  double epsilon() const { return epsilon_; }

  // P(report = 1 | true bit y).
  double ProbabilityOfOne(int y) const;
  // P(report = z | true bit y).
  double Probability(int z, int y) const;

  // Throws ArgumentError unless y is 0 or 1.
  int Perturb(int y, Rng& rng) const;

  // Unbiased contribution of one reported bit to a count:
  // (z * (e^eps + 1) - 1) / (e^eps - 1).
  double Debias(int z) const;

  // Variance of one user's Debias term; independent of the true bit.
  double TermVariance() const;

 private:
  double epsilon_;
  double keep_probability_;  // e^eps / (e^eps + 1)
  double exp_eps_minus_one_;
};

struct PerturbedBit {
  UserId user = 0;
  ItemId poi = 0;
  std::uint8_t bit = 0;
};

struct CountEstimate {
  double count = 0.0;
  // Set when no bits were supplied; count is then 0.
  bool empty_input = false;
};

// Sum of debiased bits. Not clamped: the estimate may be negative or exceed
// the number of users.
CountEstimate EstimateCount(std::span<const PerturbedBit> bits,
                            const RandomizedResponse& mech);
CountEstimate EstimateCount(std::span<const std::uint8_t> bits,
                            const RandomizedResponse& mech);

// A positive user-POI interaction at a point in time.
struct InteractionEvent {
  UserId user = 0;
  ItemId poi = 0;
  std::int64_t timestamp = 0;
};

// Half-open time windows [begin, end). The default is one window covering
// all of history.
struct TimeWindow {
  std::int64_t begin = std::numeric_limits<std::int64_t>::min();
  std::int64_t end = std::numeric_limits<std::int64_t>::max();

  bool Contains(std::int64_t t) const { return t >= begin && t < end; }
};

struct DynamicFeatureOptions {
  std::vector<TimeWindow> windows = {TimeWindow{}};
  // When false, true bits are reported unperturbed (test mode).
  bool perturb = true;
  // Clamp negatives to 0, apply log1p, then min-max scale to [0, 1].
  bool normalize = true;
  std::uint64_t seed = 0;
};

struct DynamicFeatures {
  std::vector<ItemId> items;
  std::vector<std::string> column_names;  // ldp_count_w<k>
  // raw_counts[w][j]: unclamped estimate for window w and items[j].
  std::vector<std::vector<double>> raw_counts;
  // values[w][j]: transformed feature (equals raw_counts when !normalize).
  std::vector<std::vector<double>> values;
};

// Every user in `users` reports one perturbed bit per (item, window): 1 if
// they have at least one event with that item inside the window. Users
// perturb with independent substreams keyed by (user, window), so the output
// is deterministic given the seed.
DynamicFeatures BuildDynamicFeatures(std::span<const UserId> users,
                                     std::span<const ItemId> items,
                                     std::span<const InteractionEvent> events,
                                     const RandomizedResponse& mech,
                                     const DynamicFeatureOptions& options);

// Column name for window index k.
std::string DynamicFeatureName(std::size_t window);

}  // namespace prirec

#endif  // PRIREC_LDP_H_
