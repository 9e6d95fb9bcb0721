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

// n-out-of-n additive secret sharing over Z_{2^ell}.
//
// The dealer draws a uniform share for every other party and keeps
// secret - sum(others) for itself. Any n-1 shares are jointly uniform and
// independent of the secret; all n are required to reconstruct.

#ifndef PRIREC_SECRET_SHARING_H_
#define PRIREC_SECRET_SHARING_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "prirec/fixed_point.h"
#include "prirec/random.h"

namespace prirec {

// Opaque party identifier. Users are parties under their user id; the
// recommender is kServerParty.
using PartyId = std::int64_t;
inline constexpr PartyId kServerParty = -1;

struct Share {
  PartyId owner = 0;
  RingElement value;
};

// Shares of one secret held against a declared party set. A set may be
// partial (e.g. after dropping a party); Reconstruct rejects partial sets.
class ShareSet {
 public:
  ShareSet() = default;
  // `parties` must be distinct; throws ArgumentError otherwise.
  ShareSet(std::vector<PartyId> parties, std::map<PartyId, RingElement> shares);

  const std::vector<PartyId>& parties() const { return parties_; }
  const std::map<PartyId, RingElement>& shares() const { return shares_; }
  bool complete() const { return shares_.size() == parties_.size(); }

  // Throws ArgumentError if `party` holds no share.
  Share ShareOf(PartyId party) const;
  // Copy of this set with `party`'s share removed.
  ShareSet Without(PartyId party) const;

 private:
  std::vector<PartyId> parties_;
  std::map<PartyId, RingElement> shares_;
};

// Shares `secret` among `parties`; `dealer` keeps the correcting share.
// Throws ArgumentError on an empty or duplicated party set or when `dealer`
// is not a member.
ShareSet ShareSecret(RingElement secret, std::span<const PartyId> parties,
                     PartyId dealer, const Ring& ring, Rng& rng);
// Dealer defaults to the first party.
ShareSet ShareSecret(RingElement secret, std::span<const PartyId> parties,
                     const Ring& ring, Rng& rng);

// Sum of all shares. Throws IncompleteSharesError unless every declared
// party contributed.
RingElement Reconstruct(const ShareSet& shares, const Ring& ring);

// Party-local addition. Throws ArgumentError on differing party sets.
ShareSet LocalAdd(const ShareSet& x, const ShareSet& y, const Ring& ring);

// Elementwise lift of ShareSet to vectors: each party holds one vector of
// the same length.
class VectorShareSet {
 public:
  VectorShareSet() = default;
  VectorShareSet(std::vector<PartyId> parties,
                 std::map<PartyId, std::vector<RingElement>> shares);

  const std::vector<PartyId>& parties() const { return parties_; }
  const std::map<PartyId, std::vector<RingElement>>& shares() const {
    return shares_;
  }
  std::size_t dimension() const { return dimension_; }
  bool complete() const { return shares_.size() == parties_.size(); }

  const std::vector<RingElement>& ShareOf(PartyId party) const;
  VectorShareSet Without(PartyId party) const;

 private:
  std::vector<PartyId> parties_;
  std::map<PartyId, std::vector<RingElement>> shares_;
  std::size_t dimension_ = 0;
};

VectorShareSet ShareVector(std::span<const RingElement> secret,
                           std::span<const PartyId> parties, PartyId dealer,
                           const Ring& ring, Rng& rng);
VectorShareSet ShareVector(std::span<const RingElement> secret,
                           std::span<const PartyId> parties, const Ring& ring,
                           Rng& rng);
std::vector<RingElement> ReconstructVector(const VectorShareSet& shares,
                                           const Ring& ring);
VectorShareSet LocalAdd(const VectorShareSet& x, const VectorShareSet& y,
                        const Ring& ring);

}  // namespace prirec

#endif  // PRIREC_SECRET_SHARING_H_
