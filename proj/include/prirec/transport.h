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

// In-process message transport between simulated devices and the
// recommender.
//
// Every payload that may cross a party boundary is one of the alternatives
// of `Payload`, and each alternative declares the class of data it carries.
// There is deliberately no alternative for plaintext user features, labels
// or linear models; those never leave the device.

#ifndef PRIREC_TRANSPORT_H_
#define PRIREC_TRANSPORT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <variant>
#include <vector>

#include "prirec/fixed_point.h"
#include "prirec/fm.h"
#include "prirec/secret_sharing.h"

namespace prirec {

enum class DataClass {
  kSecretShare,      // one additive share, or a sum of shares
  kMaskedAggregate,  // pairwise-masked value; uniform on its own
  kPublicModel,      // the recommender's interaction model
  kPublicItemData,   // public POI features
};

enum class Route {
  kUserToUser,
  kUserToServer,
  kServerToUser,
};

enum class MessageKind : std::uint8_t {
  kShare,
  kShareSum,
  kMaskedGradient,
  kInteractionModelPull,
  kItemFeaturePull,
};

// Phase 1 of secure DGD: one share of a neighbor's weighted model.
struct ShareMessage {
  static constexpr MessageKind kKind = MessageKind::kShare;
  static constexpr DataClass kClass = DataClass::kSecretShare;
  static constexpr Route kRoute = Route::kUserToUser;
  std::vector<RingElement> shares;
};

// Phase 2 of secure DGD: a participant's sum of received shares.
struct ShareSumMessage {
  static constexpr MessageKind kKind = MessageKind::kShareSum;
  static constexpr DataClass kClass = DataClass::kSecretShare;
  static constexpr Route kRoute = Route::kUserToUser;
  std::vector<RingElement> share_sum;
};

struct MaskedGradientMessage {
  static constexpr MessageKind kKind = MessageKind::kMaskedGradient;
  static constexpr DataClass kClass = DataClass::kMaskedAggregate;
  static constexpr Route kRoute = Route::kUserToServer;
  std::uint64_t batch_id = 0;
  std::vector<RingElement> masked;
};

struct InteractionModelPull {
  static constexpr MessageKind kKind = MessageKind::kInteractionModelPull;
  static constexpr DataClass kClass = DataClass::kPublicModel;
  static constexpr Route kRoute = Route::kServerToUser;
  InteractionModel model;
};

struct ItemFeaturePull {
  static constexpr MessageKind kKind = MessageKind::kItemFeaturePull;
  static constexpr DataClass kClass = DataClass::kPublicItemData;
  static constexpr Route kRoute = Route::kServerToUser;
  ItemId item = 0;
  std::vector<double> features;
};

using Payload = std::variant<ShareMessage, ShareSumMessage,
                             MaskedGradientMessage, InteractionModelPull,
                             ItemFeaturePull>;

inline constexpr std::size_t kNumMessageKinds = std::variant_size_v<Payload>;

struct MessageKindInfo {
  MessageKind kind;
  std::string_view name;
  DataClass data_class;
  Route route;
};

// Static description of every message kind, in Payload alternative order.
const std::array<MessageKindInfo, kNumMessageKinds>& AllMessageKinds();

struct Envelope {
  PartyId from = 0;
  PartyId to = 0;
  Payload payload;
};

MessageKind KindOf(const Payload& payload);
// Serialized payload size: ring elements at the ring's width, reals and ids
// at 8 bytes.
std::size_t PayloadBytes(const Payload& payload, const Ring& ring);

struct KindTraffic {
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

struct TrafficStats {
  std::array<KindTraffic, kNumMessageKinds> by_kind{};

  std::uint64_t TotalMessages() const;
  std::uint64_t TotalBytes() const;
  const KindTraffic& Of(MessageKind kind) const {
    return by_kind[static_cast<std::size_t>(kind)];
  }
  void Merge(const TrafficStats& other);
};

// Mailbox transport. Send checks the route against the payload's declared
// route and throws ProtocolError on a violation; self-addressed messages are
// rejected because a party never needs to message itself.
class Transport {
 public:
  explicit Transport(const Ring& ring) : ring_(ring) {}

  void Send(Envelope envelope);
  // Removes and returns everything queued for `party`, in send order.
  std::vector<Envelope> Collect(PartyId party);
  bool Idle() const;

  const TrafficStats& stats() const { return stats_; }

 private:
  Ring ring_;
  std::map<PartyId, std::vector<Envelope>> inbox_;
  TrafficStats stats_;
};

}  // namespace prirec

#endif  // PRIREC_TRANSPORT_H_
