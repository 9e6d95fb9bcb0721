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

#include "prirec/ldp.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "prirec/errors.h"

namespace prirec {

RandomizedResponse::RandomizedResponse(double epsilon) : epsilon_(epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw ArgumentError("epsilon must be finite and > 0, got " +
                        std::to_string(epsilon));
  }
  // 1 / (1 + e^-eps) is stable for large eps; expm1 keeps precision near 0.
  keep_probability_ = 1.0 / (1.0 + std::exp(-epsilon));
  exp_eps_minus_one_ = std::expm1(epsilon);
}

double RandomizedResponse::ProbabilityOfOne(int y) const {
  if (y != 0 && y != 1) throw ArgumentError("bit must be 0 or 1");
  return y == 1 ? keep_probability_ : 1.0 - keep_probability_;
}

double RandomizedResponse::Probability(int z, int y) const {
  const double p1 = ProbabilityOfOne(y);
  if (z != 0 && z != 1) throw ArgumentError("bit must be 0 or 1");
  return z == 1 ? p1 : 1.0 - p1;
}

int RandomizedResponse::Perturb(int y, Rng& rng) const {
  return UniformUnit(rng) < ProbabilityOfOne(y) ? 1 : 0;
}

double RandomizedResponse::Debias(int z) const {
  // (z (e^eps + 1) - 1) / (e^eps - 1) with e^eps + 1 = expm1 + 2.
  return (z * (exp_eps_minus_one_ + 2.0) - 1.0) / exp_eps_minus_one_;
}

double RandomizedResponse::TermVariance() const {
  const double e = exp_eps_minus_one_ + 1.0;
  return e / (exp_eps_minus_one_ * exp_eps_minus_one_);
}

CountEstimate EstimateCount(std::span<const PerturbedBit> bits,
                            const RandomizedResponse& mech) {
  if (bits.empty()) return {0.0, true};
  double total = 0.0;
  for (const PerturbedBit& b : bits) total += mech.Debias(b.bit);
  return {total, false};
}

CountEstimate EstimateCount(std::span<const std::uint8_t> bits,
                            const RandomizedResponse& mech) {
  if (bits.empty()) return {0.0, true};
  // Linear in the number of ones.
  std::size_t ones = 0;
  for (std::uint8_t b : bits) ones += b != 0;
  const double total = static_cast<double>(ones) * mech.Debias(1) +
                       static_cast<double>(bits.size() - ones) * mech.Debias(0);
  return {total, false};
}

std::string DynamicFeatureName(std::size_t window) {
  return "ldp_count_w" + std::to_string(window);
}

DynamicFeatures BuildDynamicFeatures(std::span<const UserId> users,
                                     std::span<const ItemId> items,
                                     std::span<const InteractionEvent> events,
                                     const RandomizedResponse& mech,
                                     const DynamicFeatureOptions& options) {
  DynamicFeatures out;
  out.items.assign(items.begin(), items.end());
  std::unordered_map<ItemId, std::size_t> item_index;
  for (std::size_t j = 0; j < items.size(); ++j) item_index[items[j]] = j;

  const std::size_t num_windows = options.windows.size();
  for (std::size_t w = 0; w < num_windows; ++w) {
    out.column_names.push_back(DynamicFeatureName(w));
  }

  // True bits: set of (user, item) pairs per window.
  std::vector<std::set<std::pair<UserId, std::size_t>>> truth(num_windows);
  for (const InteractionEvent& e : events) {
    auto it = item_index.find(e.poi);
    if (it == item_index.end()) continue;
    for (std::size_t w = 0; w < num_windows; ++w) {
      if (options.windows[w].Contains(e.timestamp)) {
        truth[w].insert({e.user, it->second});
      }
    }
  }

  out.raw_counts.assign(num_windows, std::vector<double>(items.size(), 0.0));
  for (std::size_t w = 0; w < num_windows; ++w) {
    // Per-item tallies of reported ones; the estimate is linear in them.
    std::vector<std::size_t> ones(items.size(), 0);
    for (UserId u : users) {
      Rng rng = MakeStream(options.seed, StreamTag::kLdpPerturbation,
                           {static_cast<std::uint64_t>(u), w});
      for (std::size_t j = 0; j < items.size(); ++j) {
        const int y = truth[w].contains({u, j}) ? 1 : 0;
        ones[j] += options.perturb ? mech.Perturb(y, rng) : y;
      }
    }
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (options.perturb) {
        out.raw_counts[w][j] =
            static_cast<double>(ones[j]) * mech.Debias(1) +
            static_cast<double>(users.size() - ones[j]) * mech.Debias(0);
      } else {
        out.raw_counts[w][j] = static_cast<double>(ones[j]);
      }
    }
  }

  out.values = out.raw_counts;
  if (options.normalize) {
    for (std::vector<double>& column : out.values) {
      for (double& v : column) v = std::log1p(std::max(v, 0.0));
      if (column.empty()) continue;
      const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
      const double min = *lo;
      const double range = *hi - *lo;
      for (double& v : column) v = range > 0.0 ? (v - min) / range : 0.0;
    }
  }
  return out;
}

}  // namespace prirec
