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

#include "prirec/protocol_dgd.h"

#include <map>
#include <set>
#include <string>
#include <utility>

#include "prirec/errors.h"
#include "prirec/random.h"

namespace prirec {

namespace {

std::size_t CheckRound(const DgdRound& round) {
  if (round.participants.empty()) {
    throw ProtocolError("DGD round for center " +
                        std::to_string(round.center) + " has no participants");
  }
  const std::size_t dim = round.participants.front().model.size();
  std::set<PartyId> seen;
  for (const DgdParticipant& p : round.participants) {
    if (!seen.insert(p.id).second) {
      throw ProtocolError("duplicate DGD participant " + std::to_string(p.id));
    }
    if (p.model.size() != dim) {
      throw ProtocolError("DGD round aborted: participant " +
                          std::to_string(p.id) + " sent a model of length " +
                          std::to_string(p.model.size()) + ", expected " +
                          std::to_string(dim));
    }
  }
  return dim;
}

}  // namespace

std::vector<double> SecureWeightedSum(const DgdRound& round,
                                      const FixedPointCodec& codec,
                                      std::uint64_t seed,
                                      const DgdOptions& options) {
  const std::size_t dim = CheckRound(round);
  const Ring& ring = codec.ring();
  std::vector<PartyId> parties;
  parties.reserve(round.participants.size());
  for (const DgdParticipant& p : round.participants) parties.push_back(p.id);

  Transport transport(ring);
  auto deliver = [&](PartyId party) {
    std::vector<Envelope> inbox = transport.Collect(party);
    if (options.on_delivery) {
      for (const Envelope& e : inbox) options.on_delivery(e);
    }
    return inbox;
  };

  // Phase 1: weight, encode, share, distribute.
  std::map<PartyId, std::vector<RingElement>> kept;
  std::vector<double> weighted(dim);
  for (const DgdParticipant& p : round.participants) {
    for (std::size_t d = 0; d < dim; ++d) weighted[d] = p.weight * p.model[d];
    std::vector<RingElement> encoded;
    try {
      encoded = codec.EncodeVector(weighted);
    } catch (const RangeError& e) {
      throw ProtocolError("DGD round aborted: participant " +
                          std::to_string(p.id) + ": " + e.what());
    }
    Rng rng = MakeStream(seed, StreamTag::kDgdShares,
                         {static_cast<std::uint64_t>(round.center), round.nonce,
                          static_cast<std::uint64_t>(p.id)});
    VectorShareSet shares = ShareVector(encoded, parties, p.id, ring, rng);
    for (PartyId j : parties) {
      if (j == p.id) continue;
      transport.Send({p.id, j, ShareMessage{shares.ShareOf(j)}});
    }
    kept[p.id] = shares.ShareOf(p.id);
  }

  // Phase 2: each participant sums the shares it holds and reports to the
  // center.
  // Every phase-1 inbox is drained before any share sum is sent.
  for (PartyId f : parties) {
    std::vector<RingElement>& sum = kept[f];
    for (const Envelope& e : deliver(f)) {
      const auto* msg = std::get_if<ShareMessage>(&e.payload);
      if (msg == nullptr || msg->shares.size() != dim) {
        throw ProtocolError("unexpected message in DGD phase 1");
      }
      for (std::size_t d = 0; d < dim; ++d) {
        sum[d] = ring.Add(sum[d], msg->shares[d]);
      }
    }
  }
  std::vector<RingElement> center_total(dim);
  std::size_t sums_at_center = 0;
  for (PartyId f : parties) {
    std::vector<RingElement> sum = std::move(kept[f]);
    if (f == round.center) {
      for (std::size_t d = 0; d < dim; ++d) {
        center_total[d] = ring.Add(center_total[d], sum[d]);
      }
      ++sums_at_center;
    } else {
      transport.Send({f, round.center, ShareSumMessage{std::move(sum)}});
    }
  }

  // Reconstruction at the center.
  for (const Envelope& e : deliver(round.center)) {
    const auto* msg = std::get_if<ShareSumMessage>(&e.payload);
    if (msg == nullptr || msg->share_sum.size() != dim) {
      throw ProtocolError("unexpected message in DGD phase 2");
    }
    for (std::size_t d = 0; d < dim; ++d) {
      center_total[d] = ring.Add(center_total[d], msg->share_sum[d]);
    }
    ++sums_at_center;
  }
  if (sums_at_center != parties.size()) {
    throw IncompleteSharesError("center " + std::to_string(round.center) +
                                " received " + std::to_string(sums_at_center) +
                                " of " + std::to_string(parties.size()) +
                                " share sums");
  }
  if (options.traffic != nullptr) options.traffic->Merge(transport.stats());
  return codec.DecodeVector(center_total);
}

std::vector<double> PlaintextWeightedSum(const DgdRound& round) {
  const std::size_t dim = CheckRound(round);
  std::vector<double> sum(dim, 0.0);
  for (const DgdParticipant& p : round.participants) {
    for (std::size_t d = 0; d < dim; ++d) sum[d] += p.weight * p.model[d];
  }
  return sum;
}

LinearModel DgdUpdate(const LinearModel& w_i, std::span<const double> grad,
                      std::span<const double> weighted_sum, double alpha) {
  const std::size_t n = w_i.weights.size();
  if (grad.size() != n || weighted_sum.size() != n) {
    throw ArgumentError("DGD update length mismatch");
  }
  LinearModel next{std::vector<double>(n)};
  for (std::size_t d = 0; d < n; ++d) {
    next.weights[d] = weighted_sum[d] - alpha * grad[d];
  }
  return next;
}

}  // namespace prirec
