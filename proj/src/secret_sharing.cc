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

#include "prirec/secret_sharing.h"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "prirec/errors.h"

namespace prirec {

namespace {

void CheckParties(std::span<const PartyId> parties) {
  if (parties.empty()) throw ArgumentError("empty party set");
  std::set<PartyId> seen(parties.begin(), parties.end());
  if (seen.size() != parties.size()) {
    throw ArgumentError("duplicate party identifier");
  }
}

void CheckDealer(std::span<const PartyId> parties, PartyId dealer) {
  if (std::find(parties.begin(), parties.end(), dealer) == parties.end()) {
    throw ArgumentError("dealer " + std::to_string(dealer) +
                        " is not in the party set");
  }
}

bool SameParties(const std::vector<PartyId>& a,
                 const std::vector<PartyId>& b) {
  return std::set<PartyId>(a.begin(), a.end()) ==
         std::set<PartyId>(b.begin(), b.end());
}

std::string MissingParty(const std::vector<PartyId>& parties,
                         auto const& shares) {
  for (PartyId p : parties) {
    if (!shares.contains(p)) return std::to_string(p);
  }
  return "?";
}

}  // namespace

ShareSet::ShareSet(std::vector<PartyId> parties,
                   std::map<PartyId, RingElement> shares)
    : parties_(std::move(parties)), shares_(std::move(shares)) {
  CheckParties(parties_);
  for (const auto& [owner, value] : shares_) {
    CheckDealer(parties_, owner);
  }
}

Share ShareSet::ShareOf(PartyId party) const {
  auto it = shares_.find(party);
  if (it == shares_.end()) {
    throw ArgumentError("party " + std::to_string(party) + " holds no share");
  }
  return {party, it->second};
}

ShareSet ShareSet::Without(PartyId party) const {
  ShareSet out = *this;
  out.shares_.erase(party);
  return out;
}

ShareSet ShareSecret(RingElement secret, std::span<const PartyId> parties,
                     PartyId dealer, const Ring& ring, Rng& rng) {
  CheckParties(parties);
  CheckDealer(parties, dealer);
  std::map<PartyId, RingElement> shares;
  RingElement kept = ring.Reduce(secret.value);
  for (PartyId p : parties) {
    if (p == dealer) continue;
    const RingElement r = ring.Random(rng);
    shares[p] = r;
    kept = ring.Sub(kept, r);
  }
  shares[dealer] = kept;
  return ShareSet({parties.begin(), parties.end()}, std::move(shares));
}

ShareSet ShareSecret(RingElement secret, std::span<const PartyId> parties,
                     const Ring& ring, Rng& rng) {
  if (parties.empty()) throw ArgumentError("empty party set");
  return ShareSecret(secret, parties, parties.front(), ring, rng);
}

RingElement Reconstruct(const ShareSet& shares, const Ring& ring) {
  if (!shares.complete()) {
    throw IncompleteSharesError("missing share of party " +
                                MissingParty(shares.parties(), shares.shares()));
  }
  RingElement sum;
  for (const auto& [owner, value] : shares.shares()) {
    sum = ring.Add(sum, value);
  }
  return sum;
}

ShareSet LocalAdd(const ShareSet& x, const ShareSet& y, const Ring& ring) {
  if (!SameParties(x.parties(), y.parties())) {
    throw ArgumentError("LocalAdd over different party sets");
  }
  std::map<PartyId, RingElement> sum;
  for (const auto& [owner, value] : x.shares()) {
    auto it = y.shares().find(owner);
    if (it != y.shares().end()) sum[owner] = ring.Add(value, it->second);
  }
  return ShareSet(x.parties(), std::move(sum));
}

VectorShareSet::VectorShareSet(
    std::vector<PartyId> parties,
    std::map<PartyId, std::vector<RingElement>> shares)
    : parties_(std::move(parties)), shares_(std::move(shares)) {
  CheckParties(parties_);
  bool first = true;
  for (const auto& [owner, values] : shares_) {
    CheckDealer(parties_, owner);
    if (first) {
      dimension_ = values.size();
      first = false;
    } else if (values.size() != dimension_) {
      throw ArgumentError("share vectors of differing length");
    }
  }
}

const std::vector<RingElement>& VectorShareSet::ShareOf(PartyId party) const {
  auto it = shares_.find(party);
  if (it == shares_.end()) {
    throw ArgumentError("party " + std::to_string(party) + " holds no share");
  }
  return it->second;
}

VectorShareSet VectorShareSet::Without(PartyId party) const {
  VectorShareSet out = *this;
  out.shares_.erase(party);
  return out;
}

VectorShareSet ShareVector(std::span<const RingElement> secret,
                           std::span<const PartyId> parties, PartyId dealer,
                           const Ring& ring, Rng& rng) {
  CheckParties(parties);
  CheckDealer(parties, dealer);
  std::map<PartyId, std::vector<RingElement>> shares;
  std::vector<RingElement> kept(secret.begin(), secret.end());
  for (RingElement& v : kept) v = ring.Reduce(v.value);
  for (PartyId p : parties) {
    if (p == dealer) continue;
    std::vector<RingElement>& mine = shares[p];
    mine.resize(secret.size());
    for (std::size_t d = 0; d < secret.size(); ++d) {
      mine[d] = ring.Random(rng);
      kept[d] = ring.Sub(kept[d], mine[d]);
    }
  }
  shares[dealer] = std::move(kept);
  return VectorShareSet({parties.begin(), parties.end()}, std::move(shares));
}

VectorShareSet ShareVector(std::span<const RingElement> secret,
                           std::span<const PartyId> parties, const Ring& ring,
                           Rng& rng) {
  if (parties.empty()) throw ArgumentError("empty party set");
  return ShareVector(secret, parties, parties.front(), ring, rng);
}

std::vector<RingElement> ReconstructVector(const VectorShareSet& shares,
                                           const Ring& ring) {
  if (!shares.complete()) {
    throw IncompleteSharesError("missing share vector of party " +
                                MissingParty(shares.parties(), shares.shares()));
  }
  std::vector<RingElement> sum(shares.dimension());
  for (const auto& [owner, values] : shares.shares()) {
    for (std::size_t d = 0; d < values.size(); ++d) {
      sum[d] = ring.Add(sum[d], values[d]);
    }
  }
  return sum;
}

VectorShareSet LocalAdd(const VectorShareSet& x, const VectorShareSet& y,
                        const Ring& ring) {
  if (!SameParties(x.parties(), y.parties())) {
    throw ArgumentError("LocalAdd over different party sets");
  }
  if (x.dimension() != y.dimension()) {
    throw ArgumentError("LocalAdd over vectors of differing length");
  }
  std::map<PartyId, std::vector<RingElement>> sum;
  for (const auto& [owner, values] : x.shares()) {
    auto it = y.shares().find(owner);
    if (it == y.shares().end()) continue;
    std::vector<RingElement>& out = sum[owner];
    out.resize(values.size());
    for (std::size_t d = 0; d < values.size(); ++d) {
      out[d] = ring.Add(values[d], it->second[d]);
    }
  }
  return VectorShareSet(x.parties(), std::move(sum));
}

}  // namespace prirec
