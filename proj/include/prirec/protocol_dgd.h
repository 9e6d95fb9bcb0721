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

// Secure decentralized gradient descent for the per-user linear models.
//
// A center user i needs sum_f S_if * w^f over its participant set without
// seeing any individual w^f. One round:
//   1. every participant f encodes S_if * w^f, splits it into one additive
//      share per participant, keeps its own and sends the rest;
//   2. every participant sums the shares it holds and sends that sum to i;
//   3. i adds the share sums, which reconstructs the weighted sum.
// The center then steps w^i <- weighted_sum - alpha * grad.

#ifndef PRIREC_PROTOCOL_DGD_H_
#define PRIREC_PROTOCOL_DGD_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "prirec/fixed_point.h"
#include "prirec/fm.h"
#include "prirec/secret_sharing.h"
#include "prirec/transport.h"

namespace prirec {

struct DgdParticipant {
  PartyId id = 0;
  // S_if, applied by the participant itself before sharing.
  double weight = 1.0;
  std::span<const double> model;
};

struct DgdRound {
  PartyId center = 0;
  std::vector<DgdParticipant> participants;
  // Distinguishes this round's randomness from every other round of the
  // same center.
  std::uint64_t nonce = 0;
};

struct DgdOptions {
  // Accumulates message counts and bytes when set.
  TrafficStats* traffic = nullptr;
  // Called for every delivered message, after phase barriers.
  std::function<void(const Envelope&)> on_delivery;
};

// Runs the share/sum exchange and returns the decoded weighted sum.
// Throws ProtocolError on an empty or duplicated participant set, on
// differing model lengths, or when a weighted model is not representable.
std::vector<double> SecureWeightedSum(const DgdRound& round,
                                      const FixedPointCodec& codec,
                                      std::uint64_t seed,
                                      const DgdOptions& options = {});

// Reference sum in plain floating point, same participant order.
std::vector<double> PlaintextWeightedSum(const DgdRound& round);

// w_i <- weighted_sum - alpha * grad. Throws ArgumentError on length
// mismatch.
LinearModel DgdUpdate(const LinearModel& w_i, std::span<const double> grad,
                      std::span<const double> weighted_sum, double alpha);

}  // namespace prirec

#endif  // PRIREC_PROTOCOL_DGD_H_
