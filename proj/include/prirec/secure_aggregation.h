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

// Pairwise one-time-pad secure aggregation of interaction-model gradients.
//
// Every unordered pair of contributors (a < b) shares a seed. Contributor a
// adds the pair's PRG stream to its encoded gradient and b subtracts it, so
// each masked upload is uniform on its own and the masks cancel in the sum
// of a complete batch.

#ifndef PRIREC_SECURE_AGGREGATION_H_
#define PRIREC_SECURE_AGGREGATION_H_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "prirec/fixed_point.h"
#include "prirec/fm.h"
#include "prirec/secret_sharing.h"

namespace prirec {

class AggregationBatch {
 public:
  // Trusted setup: issues one seed per unordered contributor pair, derived
  // from `setup_seed` and the batch id. Throws ArgumentError on an empty or
  // duplicated contributor set.
  static AggregationBatch Form(std::uint64_t batch_id,
                               std::vector<PartyId> contributors,
                               std::uint64_t setup_seed);

  std::uint64_t id() const { return id_; }
  // Ascending.
  const std::vector<PartyId>& contributors() const { return contributors_; }
  std::size_t size() const { return contributors_.size(); }
  bool Contains(PartyId party) const;
  // Symmetric in its arguments. Throws ArgumentError for a non-pair.
  std::uint64_t PairSeed(PartyId a, PartyId b) const;

 private:
  std::uint64_t id_ = 0;
  std::vector<PartyId> contributors_;
  std::map<std::pair<PartyId, PartyId>, std::uint64_t> pair_seeds_;
};

struct MaskedGradient {
  PartyId contributor = 0;
  std::size_t feature_dim = 0;
  std::size_t k = 0;
  std::vector<RingElement> masked;
};

// Throws ArgumentError if `self` is not in the batch.
MaskedGradient MaskGradient(const InteractionModel& grad, PartyId self,
                            const AggregationBatch& batch,
                            const FixedPointCodec& codec);

// Ring sum of a complete batch, decoded. Throws AggregationIncompleteError
// when a contributor is missing and ArgumentError on strangers, duplicates
// or shape mismatches.
InteractionModel Aggregate(std::span<const MaskedGradient> masked,
                           const AggregationBatch& batch,
                           const FixedPointCodec& codec);

enum class AggregationMode {
  kSum,   // step with the summed gradient
  kMean,  // step with the sum divided by the batch size
};

// V <- V - alpha * delta, delta = agg (kSum) or agg / batch_size (kMean).
InteractionModel ServerUpdate(const InteractionModel& v,
                              const InteractionModel& agg, double alpha,
                              std::size_t batch_size, AggregationMode mode);

}  // namespace prirec

#endif  // PRIREC_SECURE_AGGREGATION_H_
