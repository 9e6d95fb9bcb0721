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

#include "prirec/transport.h"

#include <string>
#include <type_traits>
#include <utility>

#include "prirec/errors.h"

namespace prirec {

namespace {

template <std::size_t... I>
constexpr std::array<MessageKindInfo, kNumMessageKinds> MakeKindTable(
    std::index_sequence<I...>) {
  constexpr std::array<std::string_view, kNumMessageKinds> kNames = {
      "share", "share_sum", "masked_gradient", "interaction_model_pull",
      "item_feature_pull"};
  return {MessageKindInfo{
      std::variant_alternative_t<I, Payload>::kKind, kNames[I],
      std::variant_alternative_t<I, Payload>::kClass,
      std::variant_alternative_t<I, Payload>::kRoute}...};
}

constexpr auto kKindTable =
    MakeKindTable(std::make_index_sequence<kNumMessageKinds>{});

// Alternative order must match the MessageKind enumerators.
static_assert([] {
  for (std::size_t i = 0; i < kNumMessageKinds; ++i) {
    if (static_cast<std::size_t>(kKindTable[i].kind) != i) return false;
  }
  return true;
}());

bool RouteAllowed(Route route, PartyId from, PartyId to) {
  const bool from_server = from == kServerParty;
  const bool to_server = to == kServerParty;
  switch (route) {
    case Route::kUserToUser:
      return !from_server && !to_server;
    case Route::kUserToServer:
      return !from_server && to_server;
    case Route::kServerToUser:
      return from_server && !to_server;
  }
  return false;
}

}  // namespace

const std::array<MessageKindInfo, kNumMessageKinds>& AllMessageKinds() {
  return kKindTable;
}

MessageKind KindOf(const Payload& payload) {
  return std::visit([](const auto& p) { return p.kKind; }, payload);
}

std::size_t PayloadBytes(const Payload& payload, const Ring& ring) {
  const std::size_t elem = ring.element_bytes();
  return std::visit(
      [elem](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ShareMessage>) {
          return p.shares.size() * elem;
        } else if constexpr (std::is_same_v<T, ShareSumMessage>) {
          return p.share_sum.size() * elem;
        } else if constexpr (std::is_same_v<T, MaskedGradientMessage>) {
          return p.masked.size() * elem;
        } else if constexpr (std::is_same_v<T, InteractionModelPull>) {
          return p.model.size() * sizeof(double);
        } else {
          return sizeof(std::int64_t) + p.features.size() * sizeof(double);
        }
      },
      payload);
}

std::uint64_t TrafficStats::TotalMessages() const {
  std::uint64_t total = 0;
  for (const KindTraffic& t : by_kind) total += t.messages;
  return total;
}

std::uint64_t TrafficStats::TotalBytes() const {
  std::uint64_t total = 0;
  for (const KindTraffic& t : by_kind) total += t.bytes;
  return total;
}

void TrafficStats::Merge(const TrafficStats& other) {
  for (std::size_t i = 0; i < kNumMessageKinds; ++i) {
    by_kind[i].messages += other.by_kind[i].messages;
    by_kind[i].bytes += other.by_kind[i].bytes;
  }
}

void Transport::Send(Envelope envelope) {
  const MessageKind kind = KindOf(envelope.payload);
  const MessageKindInfo& info = kKindTable[static_cast<std::size_t>(kind)];
  if (envelope.from == envelope.to) {
    throw ProtocolError("party " + std::to_string(envelope.from) +
                        " sent a " + std::string(info.name) +
                        " message to itself");
  }
  if (!RouteAllowed(info.route, envelope.from, envelope.to)) {
    throw ProtocolError("message kind " + std::string(info.name) +
                        " not allowed from " + std::to_string(envelope.from) +
                        " to " + std::to_string(envelope.to));
  }
  KindTraffic& t = stats_.by_kind[static_cast<std::size_t>(kind)];
  ++t.messages;
  t.bytes += PayloadBytes(envelope.payload, ring_);
  inbox_[envelope.to].push_back(std::move(envelope));
}

std::vector<Envelope> Transport::Collect(PartyId party) {
  auto it = inbox_.find(party);
  if (it == inbox_.end()) return {};
  std::vector<Envelope> out = std::move(it->second);
  inbox_.erase(it);
  return out;
}

bool Transport::Idle() const { return inbox_.empty(); }

}  // namespace prirec
