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

#include "prirec/secure_aggregation.h"

#include <algorithm>
#include <set>
#include <string>

#include "prirec/errors.h"
#include "prirec/random.h"

namespace prirec {

namespace {

std::pair<PartyId, PartyId> PairKey(PartyId a, PartyId b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

AggregationBatch AggregationBatch::Form(std::uint64_t batch_id,
                                        std::vector<PartyId> contributors,
                                        std::uint64_t setup_seed) {
  if (contributors.empty()) {
    throw ArgumentError("aggregation batch needs at least one contributor");
  }
  std::sort(contributors.begin(), contributors.end());
  if (std::adjacent_find(contributors.begin(), contributors.end()) !=
      contributors.end()) {
    throw ArgumentError("duplicate contributor in aggregation batch");
  }
  AggregationBatch batch;
  batch.id_ = batch_id;
  batch.contributors_ = std::move(contributors);
  const auto& c = batch.contributors_;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      batch.pair_seeds_[{c[i], c[j]}] = DeriveSeed(
          setup_seed, StreamTag::kAggregationSetup,
          {batch_id, static_cast<std::uint64_t>(c[i]),
           static_cast<std::uint64_t>(c[j])});
    }
  }
  return batch;
}

bool AggregationBatch::Contains(PartyId party) const {
  return std::binary_search(contributors_.begin(), contributors_.end(), party);
}

std::uint64_t AggregationBatch::PairSeed(PartyId a, PartyId b) const {
  auto it = pair_seeds_.find(PairKey(a, b));
  if (it == pair_seeds_.end()) {
    throw ArgumentError("no mask seed for pair (" + std::to_string(a) + ", " +
                        std::to_string(b) + ")");
  }
  return it->second;
}

MaskedGradient MaskGradient(const InteractionModel& grad, PartyId self,
                            const AggregationBatch& batch,
                            const FixedPointCodec& codec) {
  if (!batch.Contains(self)) {
    throw ArgumentError("contributor " + std::to_string(self) +
                        " is not in batch " + std::to_string(batch.id()));
  }
  const Ring& ring = codec.ring();
  MaskedGradient out;
  out.contributor = self;
  out.feature_dim = grad.feature_dim();
  out.k = grad.k();
  try {
    out.masked = codec.EncodeVector(grad.values());
  } catch (const RangeError& e) {
    throw ProtocolError("gradient of contributor " + std::to_string(self) +
                        " not representable: " + e.what());
  }
  for (PartyId other : batch.contributors()) {
    if (other == self) continue;
    Rng prg(batch.PairSeed(self, other));
    const bool add = self < other;
    for (RingElement& v : out.masked) {
      const RingElement r = ring.Random(prg);
      v = add ? ring.Add(v, r) : ring.Sub(v, r);
    }
  }
  return out;
}

InteractionModel Aggregate(std::span<const MaskedGradient> masked,
                           const AggregationBatch& batch,
                           const FixedPointCodec& codec) {
  if (masked.empty()) {
    throw AggregationIncompleteError("batch " + std::to_string(batch.id()) +
                                     " received no contributions");
  }
  const std::size_t dim = masked.front().feature_dim;
  const std::size_t k = masked.front().k;
  std::set<PartyId> seen;
  for (const MaskedGradient& m : masked) {
    if (!batch.Contains(m.contributor)) {
      throw ArgumentError("contribution from non-member " +
                          std::to_string(m.contributor));
    }
    if (!seen.insert(m.contributor).second) {
      throw ArgumentError("duplicate contribution from " +
                          std::to_string(m.contributor));
    }
    if (m.feature_dim != dim || m.k != k || m.masked.size() != dim * k) {
      throw ArgumentError("masked gradient shape mismatch");
    }
  }
  if (seen.size() != batch.size()) {
    throw AggregationIncompleteError(
        "batch " + std::to_string(batch.id()) + " has " +
        std::to_string(seen.size()) + " of " + std::to_string(batch.size()) +
        " contributions; masks cannot cancel");
  }
  const Ring& ring = codec.ring();
  std::vector<RingElement> sum(dim * k);
  for (const MaskedGradient& m : masked) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] = ring.Add(sum[i], m.masked[i]);
    }
  }
  return InteractionModel(dim, k, codec.DecodeVector(sum));
}

InteractionModel ServerUpdate(const InteractionModel& v,
                              const InteractionModel& agg, double alpha,
                              std::size_t batch_size, AggregationMode mode) {
  if (!v.SameShape(agg)) {
    throw ArgumentError("aggregate shape does not match the interaction model");
  }
  if (mode == AggregationMode::kMean && batch_size == 0) {
    throw ArgumentError("mean-mode update with an empty batch");
  }
  InteractionModel next = v;
  const auto a = agg.values();
  auto out = next.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double delta = mode == AggregationMode::kMean
                             ? a[i] / static_cast<double>(batch_size)
                             : a[i];
    out[i] -= alpha * delta;
  }
  return next;
}

}  // namespace prirec
