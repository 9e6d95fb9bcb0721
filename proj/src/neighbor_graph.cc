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

#include "prirec/neighbor_graph.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>
#include <utility>

#include "prirec/errors.h"

namespace prirec {

double HaversineKm(GeoPoint a, GeoPoint b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h =
      s * s + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

const NeighborRow& NeighborGraph::Row(UserId user) const {
  auto it = rows_.find(user);
  if (it == rows_.end()) {
    throw NotFoundError("user " + std::to_string(user) +
                        " is not in the neighbor graph");
  }
  return it->second;
}

void NeighborGraph::WriteCsv(std::ostream& out) const {
  out << "user_id,neighbor_id,weight\n";
  const auto old_precision = out.precision(17);
  for (const auto& [user, row] : rows_) {
    if (row.self_weight != 0.0) {
      out << user << ',' << user << ',' << row.self_weight << '\n';
    }
    for (const Neighbor& n : row.neighbors) {
      out << user << ',' << n.id << ',' << n.weight << '\n';
    }
  }
  out.precision(old_precision);
}

NeighborGraph BuildGeoGraph(std::span<const UserLocation> locations,
                            std::size_t n_max) {
  std::map<UserId, NeighborRow> rows;
  std::vector<std::pair<double, UserId>> candidates;
  candidates.reserve(locations.size());
  for (const UserLocation& self : locations) {
    if (self.point.lat < -90.0 || self.point.lat > 90.0 ||
        self.point.lon < -180.0 || self.point.lon > 180.0) {
      throw ArgumentError("user " + std::to_string(self.user) +
                          " has an out-of-range location");
    }
    candidates.clear();
    for (const UserLocation& other : locations) {
      if (other.user == self.user) continue;
      candidates.emplace_back(HaversineKm(self.point, other.point), other.user);
    }
    const std::size_t take = std::min(n_max, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take,
                      candidates.end());
    NeighborRow& row = rows[self.user];
    for (std::size_t i = 0; i < take; ++i) {
      row.neighbors.push_back({candidates[i].second, 1.0});
    }
  }
  return NeighborGraph(std::move(rows), MixingMode::kPaperLiteral);
}

NeighborGraph BuildRandomGraph(std::span<const UserId> users, std::size_t n_max,
                               std::uint64_t seed) {
  std::vector<UserId> sorted(users.begin(), users.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t n = sorted.size();

  std::map<UserId, NeighborRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    NeighborRow& row = rows[sorted[i]];
    const std::size_t others = n - 1;
    const std::size_t take = std::min(n_max, others);
    if (take == 0) continue;
    Rng rng = MakeStream(seed, StreamTag::kRandomGraph,
                         {static_cast<std::uint64_t>(sorted[i])});
    // Index r in [0, others) maps to sorted[r < i ? r : r + 1].
    auto to_user = [&](std::size_t r) { return sorted[r < i ? r : r + 1]; };
    if (2 * take < others) {
      std::unordered_set<std::size_t> chosen;
      std::uniform_int_distribution<std::size_t> pick(0, others - 1);
      while (row.neighbors.size() < take) {
        const std::size_t r = pick(rng);
        if (chosen.insert(r).second) row.neighbors.push_back({to_user(r), 1.0});
      }
    } else {
      std::vector<std::size_t> pool(others);
      for (std::size_t r = 0; r < others; ++r) pool[r] = r;
      for (std::size_t t = 0; t < take; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, others - 1);
        std::swap(pool[t], pool[pick(rng)]);
        row.neighbors.push_back({to_user(pool[t]), 1.0});
      }
    }
  }
  return NeighborGraph(std::move(rows), MixingMode::kPaperLiteral);
}

NeighborGraph MixingWeights(const NeighborGraph& graph, MixingMode mode) {
  std::map<UserId, NeighborRow> rows = graph.rows();
  for (auto& [user, row] : rows) {
    if (mode == MixingMode::kPaperLiteral) {
      row.self_weight = 0.0;
      for (Neighbor& n : row.neighbors) n.weight = 1.0;
    } else {
      const double w = 1.0 / static_cast<double>(row.neighbors.size() + 1);
      row.self_weight = w;
      for (Neighbor& n : row.neighbors) n.weight = w;
    }
  }
  return NeighborGraph(std::move(rows), mode);
}

}  // namespace prirec
