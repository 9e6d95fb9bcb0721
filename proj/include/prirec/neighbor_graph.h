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

// Directed user neighbor graph with mixing weights for decentralized
// gradient descent.

#ifndef PRIREC_NEIGHBOR_GRAPH_H_
#define PRIREC_NEIGHBOR_GRAPH_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "prirec/ldp.h"
#include "prirec/random.h"

namespace prirec {

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance in kilometres.
double HaversineKm(GeoPoint a, GeoPoint b);

struct UserLocation {
  UserId user = 0;
  GeoPoint point;
};

enum class MixingMode {
  // Weight 1 for every listed neighbor; the user itself does not take part.
  kPaperLiteral,
  // Self plus neighbors, each weighted 1/(|neighbors| + 1).
  kRowStochastic,
};

struct Neighbor {
  UserId id = 0;
  double weight = 1.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborRow {
  std::vector<Neighbor> neighbors;
  // Weight of the user's own model in the consensus sum; 0 when the user
  // does not take part.
  double self_weight = 0.0;

  friend bool operator==(const NeighborRow&, const NeighborRow&) = default;
};

class NeighborGraph {
 public:
  NeighborGraph() = default;
  explicit NeighborGraph(std::map<UserId, NeighborRow> rows,
                         MixingMode mode = MixingMode::kPaperLiteral)
      : rows_(std::move(rows)), mode_(mode) {}

  MixingMode mode() const { return mode_; }
  const std::map<UserId, NeighborRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  bool Contains(UserId user) const { return rows_.contains(user); }
  // Throws NotFoundError for an unknown user.
  const NeighborRow& Row(UserId user) const;

  // CSV dump "user_id,neighbor_id,weight"; a nonzero self weight is written
  // as a self edge.
  void WriteCsv(std::ostream& out) const;

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;

 private:
  std::map<UserId, NeighborRow> rows_;
  MixingMode mode_ = MixingMode::kPaperLiteral;
};

// Each user's `n_max` nearest other users by great-circle distance, ties by
// ascending id. Weights are left at 1; apply MixingWeights to normalize.
NeighborGraph BuildGeoGraph(std::span<const UserLocation> locations,
                            std::size_t n_max);

// Each user gets min(n_max, |users| - 1) distinct other users drawn
// uniformly from the substream for that user.
NeighborGraph BuildRandomGraph(std::span<const UserId> users, std::size_t n_max,
                               std::uint64_t seed);

NeighborGraph MixingWeights(const NeighborGraph& graph, MixingMode mode);

}  // namespace prirec

#endif  // PRIREC_NEIGHBOR_GRAPH_H_
