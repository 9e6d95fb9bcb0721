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

// Users, POIs and their interactions, plus the CSV formats they are stored
// in:
//
//   users.csv         user_id,lat,lon,f1..fm       (lat/lon may be blank)
//   items.csv         item_id,lat,lon,g1..gn[,ldp_count_w<k>...]
//   interactions.csv  user_id,item_id,label,timestamp   (label in {0,1})

#ifndef PRIREC_DATASET_H_
#define PRIREC_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "prirec/fm.h"
#include "prirec/ldp.h"
#include "prirec/neighbor_graph.h"

namespace prirec {

struct UserRecord {
  UserId id = 0;
  std::optional<GeoPoint> location;
  std::vector<double> features;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct ItemRecord {
  ItemId id = 0;
  std::optional<GeoPoint> location;
  std::vector<double> features;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  int label = 0;  // on-disk domain {0, 1}
  std::int64_t timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// The single place where on-disk labels {0, 1} become training labels
// {-1, +1}. Throws DataError for anything else.
int TrainingLabel(int disk_label);

class Dataset {
 public:
  Dataset() = default;
  // Validates and indexes; throws DataError on any violated invariant.
  Dataset(std::vector<std::string> user_feature_names,
          std::vector<std::string> item_feature_names,
          std::vector<UserRecord> users, std::vector<ItemRecord> items,
          std::vector<Interaction> interactions);

  const std::vector<std::string>& user_feature_names() const {
    return user_feature_names_;
  }
  const std::vector<std::string>& item_feature_names() const {
    return item_feature_names_;
  }
  const std::vector<UserRecord>& users() const { return users_; }
  const std::vector<ItemRecord>& items() const { return items_; }
  const std::vector<Interaction>& interactions() const {
    return interactions_;
  }

  std::size_t user_feature_dim() const { return user_feature_names_.size(); }
  std::size_t item_feature_dim() const { return item_feature_names_.size(); }
  // D = m + n.
  std::size_t feature_dim() const {
    return user_feature_dim() + item_feature_dim();
  }

  std::vector<UserId> UserIds() const;
  std::vector<ItemId> ItemIds() const;
  bool HasUserLocations() const;
  std::vector<UserLocation> UserLocations() const;

  // Throw NotFoundError for unknown ids.
  const UserRecord& User(UserId id) const;
  const ItemRecord& Item(ItemId id) const;

  // X^{ij} = X^i (+) X^j.
  std::vector<double> SampleFeatures(UserId user, ItemId item) const;
  Sample MakeSample(const Interaction& interaction) const;
  std::vector<Sample> MakeSamples(std::span<const Interaction> rows) const;

  // Copies with the interaction list replaced; users and items unchanged.
  Dataset WithInteractions(std::vector<Interaction> interactions) const;
  // Copy with the dynamic feature columns set on every item, replacing any
  // existing columns of the same names.
  Dataset WithDynamicFeatures(const DynamicFeatures& features) const;
  // Copy with every ldp_count_w<k> column removed.
  Dataset WithoutDynamicFeatures() const;
  // Copy keeping only items with positive interactions from at least
  // `min_users` distinct users, and interactions on those items.
  Dataset FilterItemsByUserCount(std::size_t min_users) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.user_feature_names_ == b.user_feature_names_ &&
           a.item_feature_names_ == b.item_feature_names_ &&
           a.users_ == b.users_ && a.items_ == b.items_ &&
           a.interactions_ == b.interactions_;
  }

 private:
  void BuildIndex();

  std::vector<std::string> user_feature_names_;
  std::vector<std::string> item_feature_names_;
  std::vector<UserRecord> users_;
  std::vector<ItemRecord> items_;
  std::vector<Interaction> interactions_;
  std::unordered_map<UserId, std::size_t> user_index_;
  std::unordered_map<ItemId, std::size_t> item_index_;
};

// Positive interactions as LDP collection events.
std::vector<InteractionEvent> PositiveEvents(
    std::span<const Interaction> interactions);

struct DatasetPaths {
  std::string users;
  std::string items;
  std::string interactions;
};

// Throws DataError (with file and row) on a missing file, bad header,
// non-numeric field, duplicate id or unresolved reference.
Dataset LoadDataset(const DatasetPaths& paths);
void WriteDataset(const Dataset& dataset, const DatasetPaths& paths);
void WriteItems(const Dataset& dataset, const std::string& path);
// Interaction table alone, header "user_id,item_id,label,timestamp".
std::vector<Interaction> ReadInteractions(const std::string& path);
void WriteInteractions(std::span<const Interaction> rows,
                       const std::string& path);

struct NegativeSamplingResult {
  std::vector<Interaction> interactions;
  // Users who already have a positive with every item; their positives are
  // kept without negatives.
  std::vector<UserId> saturated_users;
};

// For each positive (i, j), `ratio` negatives (i, j') with j' uniform over
// the items i has no positive with. Negatives inherit the positive's
// timestamp and follow it in the output.
NegativeSamplingResult NegativeSample(std::span<const Interaction> positives,
                                      std::size_t ratio,
                                      std::span<const ItemId> items,
                                      std::uint64_t seed);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;

  void Validate() const;
};

struct SplitResult {
  std::vector<Interaction> train;
  std::vector<Interaction> test;
};

// Seeded random partition with |train| = floor(fraction * n); repetition r
// shuffles with seed + r.
SplitResult Split(std::span<const Interaction> interactions,
                  const SplitSpec& spec, std::size_t repetition = 0);

struct SyntheticSpec {
  std::size_t users = 200;
  std::size_t items = 50;
  std::size_t user_features = 5;
  std::size_t item_features = 5;
  std::size_t samples = 5000;
  std::size_t k = 5;
  // Inverse scale of the logistic label noise; infinity means noiseless.
  double separability = 8.0;
  // Standard deviation of a hidden per-item bias added to the planted score.
  // Only observable through interaction counts.
  double popularity_skew = 0.0;
  // Standard deviation of per-user deviations from the planted linear model.
  double user_heterogeneity = 0.0;
  bool with_locations = true;
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  Dataset dataset;
  // Planted FM over the D = m + n visible features.
  LinearModel planted_linear;
  InteractionModel planted_interaction;
  std::vector<double> item_popularity;  // per item, in dataset order
  // Noise-free planted score of each interaction (before thresholding).
  std::vector<double> planted_scores;
};

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace prirec

#endif  // PRIREC_DATASET_H_
