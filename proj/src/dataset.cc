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

#include "prirec/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>
#include <utility>

#include "prirec/csv.h"
#include "prirec/errors.h"
#include "prirec/random.h"

namespace prirec {

namespace {

constexpr std::string_view kDynamicPrefix = "ldp_count_w";

bool IsDynamicColumn(const std::string& name) {
  return name.starts_with(kDynamicPrefix);
}

std::ifstream OpenForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::vector<std::string> ReadHeader(std::istream& in, const std::string& path,
                                    std::size_t& line_number,
                                    std::span<const std::string_view> leading) {
  std::string line;
  if (!csv::ReadRow(in, line, line_number)) {
    throw DataError(path, line_number, "missing header row");
  }
  std::vector<std::string> header = csv::SplitLine(line);
  if (header.size() < leading.size()) {
    throw DataError(path, line_number, "header has too few columns");
  }
  for (std::size_t i = 0; i < leading.size(); ++i) {
    if (header[i] != leading[i]) {
      throw DataError(path, line_number,
                      "expected column '" + std::string(leading[i]) +
                          "', found '" + header[i] + "'");
    }
  }
  return {header.begin() + static_cast<std::ptrdiff_t>(leading.size()),
          header.end()};
}

std::int64_t RequireInt(const std::string& field, const std::string& path,
                        std::size_t row, std::string_view column) {
  auto v = csv::ParseInt(field);
  if (!v) {
    throw DataError(path, row,
                    "non-integer " + std::string(column) + " '" + field + "'");
  }
  return *v;
}

double RequireDouble(const std::string& field, const std::string& path,
                     std::size_t row, std::string_view column) {
  auto v = csv::ParseDouble(field);
  if (!v) {
    throw DataError(path, row,
                    "non-numeric " + std::string(column) + " '" + field + "'");
  }
  return *v;
}

std::optional<GeoPoint> ParseLocation(const std::string& lat,
                                      const std::string& lon,
                                      const std::string& path,
                                      std::size_t row) {
  if (lat.empty() && lon.empty()) return std::nullopt;
  if (lat.empty() || lon.empty()) {
    throw DataError(path, row, "lat and lon must both be set or both blank");
  }
  GeoPoint p{RequireDouble(lat, path, row, "lat"),
             RequireDouble(lon, path, row, "lon")};
  if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
    throw DataError(path, row, "location out of range");
  }
  return p;
}

template <typename Record>
std::vector<Record> ReadEntities(const std::string& path,
                                 std::string_view id_column,
                                 std::vector<std::string>& feature_names) {
  std::ifstream in = OpenForRead(path);
  std::size_t line_number = 0;
  const std::array<std::string_view, 3> leading = {id_column, "lat", "lon"};
  feature_names = ReadHeader(in, path, line_number, leading);
  const std::size_t columns = feature_names.size() + 3;

  std::vector<Record> records;
  std::string line;
  while (csv::ReadRow(in, line, line_number)) {
    std::vector<std::string> f = csv::SplitLine(line);
    if (f.size() != columns) {
      throw DataError(path, line_number,
                      "expected " + std::to_string(columns) + " fields, got " +
                          std::to_string(f.size()));
    }
    Record r;
    r.id = RequireInt(f[0], path, line_number, id_column);
    r.location = ParseLocation(f[1], f[2], path, line_number);
    r.features.reserve(feature_names.size());
    for (std::size_t c = 3; c < columns; ++c) {
      r.features.push_back(
          RequireDouble(f[c], path, line_number, feature_names[c - 3]));
    }
    records.push_back(std::move(r));
  }
  return records;
}

template <typename Record>
void WriteEntities(const std::string& path, std::string_view id_column,
                   const std::vector<std::string>& feature_names,
                   const std::vector<Record>& records) {
  std::ofstream out = OpenForWrite(path);
  std::vector<std::string> header = {std::string(id_column), "lat", "lon"};
  header.insert(header.end(), feature_names.begin(), feature_names.end());
  out << csv::Join(header) << '\n';
  for (const Record& r : records) {
    std::vector<std::string> f = {std::to_string(r.id)};
    if (r.location) {
      f.push_back(csv::FormatDouble(r.location->lat));
      f.push_back(csv::FormatDouble(r.location->lon));
    } else {
      f.emplace_back();
      f.emplace_back();
    }
    for (double v : r.features) f.push_back(csv::FormatDouble(v));
    out << csv::Join(f) << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

double SampleNormal(Rng& rng, double stddev) {
  std::normal_distribution<double> n(0.0, stddev);
  return n(rng);
}

}  // namespace

int TrainingLabel(int disk_label) {
  if (disk_label == 1) return 1;
  if (disk_label == 0) return -1;
  throw DataError("label must be 0 or 1, got " + std::to_string(disk_label));
}

Dataset::Dataset(std::vector<std::string> user_feature_names,
                 std::vector<std::string> item_feature_names,
                 std::vector<UserRecord> users, std::vector<ItemRecord> items,
                 std::vector<Interaction> interactions)
    : user_feature_names_(std::move(user_feature_names)),
      item_feature_names_(std::move(item_feature_names)),
      users_(std::move(users)),
      items_(std::move(items)),
      interactions_(std::move(interactions)) {
  BuildIndex();
}

void Dataset::BuildIndex() {
  user_index_.clear();
  item_index_.clear();
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (users_[i].features.size() != user_feature_names_.size()) {
      throw DataError("user " + std::to_string(users_[i].id) + " has " +
                      std::to_string(users_[i].features.size()) +
                      " features, expected " +
                      std::to_string(user_feature_names_.size()));
    }
    if (!user_index_.emplace(users_[i].id, i).second) {
      throw DataError("duplicate user id " + std::to_string(users_[i].id));
    }
  }
  for (std::size_t j = 0; j < items_.size(); ++j) {
    if (items_[j].features.size() != item_feature_names_.size()) {
      throw DataError("item " + std::to_string(items_[j].id) + " has " +
                      std::to_string(items_[j].features.size()) +
                      " features, expected " +
                      std::to_string(item_feature_names_.size()));
    }
    if (!item_index_.emplace(items_[j].id, j).second) {
      throw DataError("duplicate item id " + std::to_string(items_[j].id));
    }
  }
  for (std::size_t r = 0; r < interactions_.size(); ++r) {
    const Interaction& x = interactions_[r];
    if (!user_index_.contains(x.user)) {
      throw DataError("interaction " + std::to_string(r + 1) +
                      " references unknown user " + std::to_string(x.user));
    }
    if (!item_index_.contains(x.item)) {
      throw DataError("interaction " + std::to_string(r + 1) +
                      " references unknown item " + std::to_string(x.item));
    }
    TrainingLabel(x.label);
  }
}

std::vector<UserId> Dataset::UserIds() const {
  std::vector<UserId> ids;
  ids.reserve(users_.size());
  for (const UserRecord& u : users_) ids.push_back(u.id);
  return ids;
}

std::vector<ItemId> Dataset::ItemIds() const {
  std::vector<ItemId> ids;
  ids.reserve(items_.size());
  for (const ItemRecord& j : items_) ids.push_back(j.id);
  return ids;
}

bool Dataset::HasUserLocations() const {
  return !users_.empty() &&
         std::all_of(users_.begin(), users_.end(),
                     [](const UserRecord& u) { return u.location.has_value(); });
}

std::vector<UserLocation> Dataset::UserLocations() const {
  std::vector<UserLocation> out;
  for (const UserRecord& u : users_) {
    if (u.location) out.push_back({u.id, *u.location});
  }
  return out;
}

const UserRecord& Dataset::User(UserId id) const {
  auto it = user_index_.find(id);
  if (it == user_index_.end()) {
    throw NotFoundError("unknown user " + std::to_string(id));
  }
  return users_[it->second];
}

const ItemRecord& Dataset::Item(ItemId id) const {
  auto it = item_index_.find(id);
  if (it == item_index_.end()) {
    throw NotFoundError("unknown item " + std::to_string(id));
  }
  return items_[it->second];
}

std::vector<double> Dataset::SampleFeatures(UserId user, ItemId item) const {
  const UserRecord& u = User(user);
  const ItemRecord& j = Item(item);
  std::vector<double> x;
  x.reserve(feature_dim());
  x.insert(x.end(), u.features.begin(), u.features.end());
  x.insert(x.end(), j.features.begin(), j.features.end());
  return x;
}

Sample Dataset::MakeSample(const Interaction& interaction) const {
  return Sample{interaction.user, interaction.item,
                SampleFeatures(interaction.user, interaction.item),
                TrainingLabel(interaction.label)};
}

std::vector<Sample> Dataset::MakeSamples(
    std::span<const Interaction> rows) const {
  std::vector<Sample> out;
  out.reserve(rows.size());
  for (const Interaction& r : rows) out.push_back(MakeSample(r));
  return out;
}

Dataset Dataset::WithInteractions(std::vector<Interaction> interactions) const {
  return Dataset(user_feature_names_, item_feature_names_, users_, items_,
                 std::move(interactions));
}

Dataset Dataset::WithDynamicFeatures(const DynamicFeatures& features) const {
  std::vector<std::string> names = item_feature_names_;
  std::vector<ItemRecord> items = items_;
  std::unordered_map<ItemId, std::size_t> position;
  for (std::size_t j = 0; j < features.items.size(); ++j) {
    position[features.items[j]] = j;
  }
  for (std::size_t w = 0; w < features.column_names.size(); ++w) {
    const std::string& name = features.column_names[w];
    auto existing = std::find(names.begin(), names.end(), name);
    const std::size_t column = static_cast<std::size_t>(existing - names.begin());
    if (existing == names.end()) names.push_back(name);
    for (ItemRecord& item : items) {
      auto it = position.find(item.id);
      const double v = it == position.end() ? 0.0 : features.values[w][it->second];
      if (column < item.features.size()) {
        item.features[column] = v;
      } else {
        item.features.push_back(v);
      }
    }
  }
  return Dataset(user_feature_names_, std::move(names), users_,
                 std::move(items), interactions_);
}

Dataset Dataset::WithoutDynamicFeatures() const {
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < item_feature_names_.size(); ++c) {
    if (!IsDynamicColumn(item_feature_names_[c])) {
      keep.push_back(c);
      names.push_back(item_feature_names_[c]);
    }
  }
  std::vector<ItemRecord> items = items_;
  for (ItemRecord& item : items) {
    std::vector<double> f;
    for (std::size_t c : keep) f.push_back(item.features[c]);
    item.features = std::move(f);
  }
  return Dataset(user_feature_names_, std::move(names), users_,
                 std::move(items), interactions_);
}

Dataset Dataset::FilterItemsByUserCount(std::size_t min_users) const {
  std::map<ItemId, std::set<UserId>> users_per_item;
  for (const Interaction& x : interactions_) {
    if (x.label == 1) users_per_item[x.item].insert(x.user);
  }
  std::vector<ItemRecord> items;
  std::unordered_set<ItemId> kept;
  for (const ItemRecord& j : items_) {
    auto it = users_per_item.find(j.id);
    const std::size_t n = it == users_per_item.end() ? 0 : it->second.size();
    if (n >= min_users) {
      items.push_back(j);
      kept.insert(j.id);
    }
  }
  std::vector<Interaction> rows;
  for (const Interaction& x : interactions_) {
    if (kept.contains(x.item)) rows.push_back(x);
  }
  return Dataset(user_feature_names_, item_feature_names_, users_,
                 std::move(items), std::move(rows));
}

std::vector<InteractionEvent> PositiveEvents(
    std::span<const Interaction> interactions) {
  std::vector<InteractionEvent> events;
  for (const Interaction& x : interactions) {
    if (x.label == 1) events.push_back({x.user, x.item, x.timestamp});
  }
  return events;
}

std::vector<Interaction> ReadInteractions(const std::string& path) {
  std::ifstream in = OpenForRead(path);
  std::size_t line_number = 0;
  const std::array<std::string_view, 4> leading = {"user_id", "item_id",
                                                   "label", "timestamp"};
  const auto extra = ReadHeader(in, path, line_number, leading);
  if (!extra.empty()) {
    throw DataError(path, line_number, "unexpected column '" + extra[0] + "'");
  }
  std::vector<Interaction> rows;
  std::string line;
  while (csv::ReadRow(in, line, line_number)) {
    std::vector<std::string> f = csv::SplitLine(line);
    if (f.size() != 4) {
      throw DataError(path, line_number,
                      "expected 4 fields, got " + std::to_string(f.size()));
    }
    Interaction r;
    r.user = RequireInt(f[0], path, line_number, "user_id");
    r.item = RequireInt(f[1], path, line_number, "item_id");
    const std::int64_t label = RequireInt(f[2], path, line_number, "label");
    if (label != 0 && label != 1) {
      throw DataError(path, line_number, "label must be 0 or 1");
    }
    r.label = static_cast<int>(label);
    r.timestamp = RequireInt(f[3], path, line_number, "timestamp");
    rows.push_back(r);
  }
  return rows;
}

Dataset LoadDataset(const DatasetPaths& paths) {
  std::vector<std::string> user_names;
  std::vector<std::string> item_names;
  auto users = ReadEntities<UserRecord>(paths.users, "user_id", user_names);
  auto items = ReadEntities<ItemRecord>(paths.items, "item_id", item_names);
  auto interactions = ReadInteractions(paths.interactions);
  return Dataset(std::move(user_names), std::move(item_names), std::move(users),
                 std::move(items), std::move(interactions));
}

void WriteItems(const Dataset& dataset, const std::string& path) {
  WriteEntities(path, "item_id", dataset.item_feature_names(), dataset.items());
}

void WriteDataset(const Dataset& dataset, const DatasetPaths& paths) {
  WriteEntities(paths.users, "user_id", dataset.user_feature_names(),
                dataset.users());
  WriteItems(dataset, paths.items);
  WriteInteractions(dataset.interactions(), paths.interactions);
}

void WriteInteractions(std::span<const Interaction> rows,
                       const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  out << "user_id,item_id,label,timestamp\n";
  for (const Interaction& x : rows) {
    out << x.user << ',' << x.item << ',' << x.label << ',' << x.timestamp
        << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

NegativeSamplingResult NegativeSample(std::span<const Interaction> positives,
                                      std::size_t ratio,
                                      std::span<const ItemId> items,
                                      std::uint64_t seed) {
  std::map<UserId, std::set<ItemId>> positive_items;
  for (const Interaction& p : positives) positive_items[p.user].insert(p.item);

  std::vector<ItemId> universe(items.begin(), items.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  // Per-user candidate lists, built on first use.
  std::map<UserId, std::vector<ItemId>> candidates;
  NegativeSamplingResult result;
  std::set<UserId> saturated;
  Rng rng = MakeStream(seed, StreamTag::kNegativeSampling);
  for (const Interaction& p : positives) {
    result.interactions.push_back(p);
    if (ratio == 0) continue;
    auto [it, inserted] = candidates.try_emplace(p.user);
    if (inserted) {
      const std::set<ItemId>& mine = positive_items[p.user];
      for (ItemId j : universe) {
        if (!mine.contains(j)) it->second.push_back(j);
      }
    }
    const std::vector<ItemId>& pool = it->second;
    if (pool.empty()) {
      saturated.insert(p.user);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t r = 0; r < ratio; ++r) {
      result.interactions.push_back({p.user, pool[pick(rng)], 0, p.timestamp});
    }
  }
  result.saturated_users.assign(saturated.begin(), saturated.end());
  return result;
}

void SplitSpec::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  if (repetitions == 0) throw ConfigError("repetitions must be >= 1");
}

SplitResult Split(std::span<const Interaction> interactions,
                  const SplitSpec& spec, std::size_t repetition) {
  spec.Validate();
  if (repetition >= spec.repetitions) {
    throw ConfigError("repetition " + std::to_string(repetition) +
                      " out of range for " + std::to_string(spec.repetitions));
  }
  const std::size_t n = interactions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeStream(spec.seed + repetition, StreamTag::kSplit);
  std::shuffle(order.begin(), order.end(), rng);
  // Guard against 0.8 * 1000 landing just below 800.
  const auto train_size = static_cast<std::size_t>(
      std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
  SplitResult out;
  out.train.reserve(train_size);
  out.test.reserve(n - train_size);
  for (std::size_t i = 0; i < n; ++i) {
    (i < train_size ? out.train : out.test).push_back(interactions[order[i]]);
  }
  return out;
}

SyntheticDataset GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.users == 0 || spec.items == 0 || spec.k == 0 ||
      spec.user_features + spec.item_features == 0) {
    throw ConfigError("synthetic spec sizes must be positive");
  }
  const std::size_t m = spec.user_features;
  const std::size_t n = spec.item_features;
  const std::size_t dim = m + n;
  Rng rng = MakeStream(spec.seed, StreamTag::kSynthetic);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);

  SyntheticDataset out;
  out.planted_linear = LinearModel(dim);
  for (std::size_t d = 1; d <= dim; ++d) {
    out.planted_linear.weights[d] = SampleNormal(rng, 1.0);
  }
  out.planted_interaction = InteractionModel(dim, spec.k);
  const double v_scale = 1.0 / std::sqrt(static_cast<double>(spec.k));
  for (double& v : out.planted_interaction.values()) {
    v = SampleNormal(rng, v_scale);
  }

  std::vector<std::string> user_names;
  std::vector<std::string> item_names;
  for (std::size_t c = 1; c <= m; ++c) user_names.push_back("f" + std::to_string(c));
  for (std::size_t c = 1; c <= n; ++c) item_names.push_back("g" + std::to_string(c));

  // Ids start at 1 so that 0 never stands for "unset".
  std::vector<UserRecord> users(spec.users);
  std::vector<std::vector<double>> user_deviation(spec.users);
  for (std::size_t i = 0; i < spec.users; ++i) {
    users[i].id = static_cast<UserId>(i + 1);
    if (spec.with_locations) {
      users[i].location = GeoPoint{35.68 + jitter(rng), 139.76 + jitter(rng)};
    }
    for (std::size_t c = 0; c < m; ++c) users[i].features.push_back(unit(rng));
    user_deviation[i].assign(dim + 1, 0.0);
    if (spec.user_heterogeneity > 0.0) {
      for (double& dv : user_deviation[i]) {
        dv = SampleNormal(rng, spec.user_heterogeneity);
      }
    }
  }
  std::vector<ItemRecord> items(spec.items);
  out.item_popularity.assign(spec.items, 0.0);
  for (std::size_t j = 0; j < spec.items; ++j) {
    items[j].id = static_cast<ItemId>(j + 1);
    if (spec.with_locations) {
      items[j].location = GeoPoint{35.68 + jitter(rng), 139.76 + jitter(rng)};
    }
    for (std::size_t c = 0; c < n; ++c) items[j].features.push_back(unit(rng));
    if (spec.popularity_skew > 0.0) {
      out.item_popularity[j] = SampleNormal(rng, spec.popularity_skew);
    }
  }

  std::uniform_int_distribution<std::size_t> pick_user(0, spec.users - 1);
  std::uniform_int_distribution<std::size_t> pick_item(0, spec.items - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(spec.samples);
  out.planted_scores.resize(spec.samples);
  std::vector<double> x(dim);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    const std::size_t i = pick_user(rng);
    const std::size_t j = pick_item(rng);
    pairs[s] = {i, j};
    std::copy(users[i].features.begin(), users[i].features.end(), x.begin());
    std::copy(items[j].features.begin(), items[j].features.end(),
              x.begin() + static_cast<std::ptrdiff_t>(m));
    LinearModel w = out.planted_linear;
    for (std::size_t d = 0; d <= dim; ++d) w.weights[d] += user_deviation[i][d];
    out.planted_scores[s] =
        Predict(x, w, out.planted_interaction) + out.item_popularity[j];
  }

  std::vector<double> sorted = out.planted_scores;
  double threshold = 0.0;
  if (!sorted.empty()) {
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    threshold = *mid;
  }

  std::vector<Interaction> interactions(spec.samples);
  const bool noiseless = std::isinf(spec.separability);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    double margin = out.planted_scores[s] - threshold;
    if (!noiseless) {
      const double u = std::clamp(unit(rng), 1e-12, 1.0 - 1e-12);
      margin += std::log(u / (1.0 - u)) / spec.separability;
    }
    interactions[s] = {users[pairs[s].first].id, items[pairs[s].second].id,
                       margin > 0.0 ? 1 : 0, static_cast<std::int64_t>(s)};
  }

  out.dataset = Dataset(std::move(user_names), std::move(item_names),
                        std::move(users), std::move(items),
                        std::move(interactions));
  return out;
}

}  // namespace prirec
