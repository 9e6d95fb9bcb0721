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

#include "prirec/config.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <variant>

#include "prirec/csv.h"
#include "prirec/errors.h"

namespace prirec {

namespace {

using FieldPtr =
    std::variant<std::string ExperimentConfig::*,
                 std::size_t ExperimentConfig::*, double ExperimentConfig::*,
                 int ExperimentConfig::*, bool ExperimentConfig::*>;

struct Field {
  std::string_view key;
  FieldPtr ptr;
};

#define PRIREC_FIELD(name) Field{#name, &ExperimentConfig::name}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      PRIREC_FIELD(users),
      PRIREC_FIELD(items),
      PRIREC_FIELD(interactions),
      PRIREC_FIELD(synthetic_users),
      PRIREC_FIELD(synthetic_items),
      PRIREC_FIELD(synthetic_user_features),
      PRIREC_FIELD(synthetic_item_features),
      PRIREC_FIELD(synthetic_samples),
      PRIREC_FIELD(synthetic_separability),
      PRIREC_FIELD(synthetic_popularity_skew),
      PRIREC_FIELD(synthetic_user_heterogeneity),
      PRIREC_FIELD(synthetic_locations),
      PRIREC_FIELD(negative_ratio),
      PRIREC_FIELD(filter_min_users),
      PRIREC_FIELD(train_fraction),
      PRIREC_FIELD(repetitions),
      PRIREC_FIELD(alpha),
      PRIREC_FIELD(lambda_w),
      PRIREC_FIELD(lambda_v),
      PRIREC_FIELD(K),
      PRIREC_FIELD(N),
      PRIREC_FIELD(T),
      PRIREC_FIELD(epsilon),
      PRIREC_FIELD(ell),
      PRIREC_FIELD(l_f),
      PRIREC_FIELD(B),
      PRIREC_FIELD(agg_mode),
      PRIREC_FIELD(mixing),
      PRIREC_FIELD(graph),
      PRIREC_FIELD(scheduler),
      PRIREC_FIELD(threads),
      PRIREC_FIELD(dgd_schedule),
      PRIREC_FIELD(plaintext),
      PRIREC_FIELD(init_range),
      PRIREC_FIELD(transcript),
      PRIREC_FIELD(dynamic_features),
      PRIREC_FIELD(windows),
      PRIREC_FIELD(matching),
      PRIREC_FIELD(radius),
      PRIREC_FIELD(seed),
      PRIREC_FIELD(out),
      PRIREC_FIELD(scale_sizes),
  };
  return fields;
}

#undef PRIREC_FIELD

const Field& FindField(std::string_view key) {
  for (const Field& f : Fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': '" +
                    std::string(value) + "' is not " + std::string(expected));
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void RequireOneOf(std::string_view key, const std::string& value,
                  std::initializer_list<std::string_view> allowed) {
  if (std::find(allowed.begin(), allowed.end(), value) != allowed.end()) {
    return;
  }
  std::string list;
  for (std::string_view a : allowed) {
    if (!list.empty()) list += " | ";
    list += a;
  }
  BadValue(key, value, "one of " + list);
}

}  // namespace

std::vector<std::string_view> ConfigKeys() {
  std::vector<std::string_view> keys;
  for (const Field& f : Fields()) keys.push_back(f.key);
  return keys;
}

bool IsFlagKey(std::string_view key) {
  return std::holds_alternative<bool ExperimentConfig::*>(FindField(key).ptr);
}

void SetConfigValue(ExperimentConfig& config, std::string_view key,
                    std::string_view value) {
  const Field& field = FindField(key);
  value = Trim(value);
  std::visit(
      [&](auto ptr) {
        using T = std::remove_reference_t<decltype(config.*ptr)>;
        if constexpr (std::is_same_v<T, std::string>) {
          config.*ptr = std::string(value);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") {
            config.*ptr = true;
          } else if (value == "false" || value == "0") {
            config.*ptr = false;
          } else {
            BadValue(key, value, "a boolean");
          }
        } else if constexpr (std::is_same_v<T, double>) {
          auto v = csv::ParseDouble(value);
          if (!v) BadValue(key, value, "a finite number");
          config.*ptr = *v;
        } else {
          auto v = csv::ParseInt(value);
          if (!v || *v < 0 ||
              static_cast<std::uint64_t>(*v) >
                  static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
            BadValue(key, value, "a non-negative integer");
          }
          config.*ptr = static_cast<T>(*v);
        }
      },
      field.ptr);
}

std::string GetConfigValue(const ExperimentConfig& config,
                           std::string_view key) {
  const Field& field = FindField(key);
  return std::visit(
      [&](auto ptr) -> std::string {
        const auto& v = config.*ptr;
        using T = std::remove_cvref_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return csv::FormatDouble(v);
        } else {
          return std::to_string(v);
        }
      },
      field.ptr);
}

void ReadConfig(std::istream& in, ExperimentConfig& config) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(row) +
                        ": expected key = value");
    }
    SetConfigValue(config, Trim(view.substr(0, eq)), view.substr(eq + 1));
  }
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig config;
  ReadConfig(in, config);
  return config;
}

void WriteConfig(std::ostream& out, const ExperimentConfig& config) {
  for (const Field& f : Fields()) {
    out << f.key << " = " << GetConfigValue(config, f.key) << '\n';
  }
}

void ExperimentConfig::Validate() const {
  if (!synthetic() &&
      (users.empty() || items.empty() || interactions.empty())) {
    throw ConfigError("users, items and interactions must be given together");
  }
  if (synthetic()) {
    if (synthetic_users == 0 || synthetic_items == 0 ||
        synthetic_samples == 0) {
      throw ConfigError("synthetic sizes must be positive");
    }
    if (synthetic_user_features + synthetic_item_features == 0) {
      throw ConfigError("synthetic data needs at least one feature");
    }
    if (!(synthetic_separability > 0.0)) {
      throw ConfigError("synthetic_separability must be > 0");
    }
    if (synthetic_popularity_skew < 0.0 || synthetic_user_heterogeneity < 0.0) {
      throw ConfigError("synthetic noise scales must be >= 0");
    }
  }
  Splitting().Validate();
  Simulation().Validate();
  RequireOneOf("agg_mode", agg_mode, {"sum", "mean"});
  RequireOneOf("mixing", mixing, {"row_stochastic", "paper_literal"});
  RequireOneOf("graph", graph, {"auto", "geo", "random"});
  RequireOneOf("scheduler", scheduler, {"deterministic", "concurrent"});
  RequireOneOf("dgd_schedule", dgd_schedule, {"per_sample", "per_epoch"});
  RequireOneOf("matching", matching, {"all", "geo_radius"});
  if (!(radius >= 0.0)) throw ConfigError("radius must be >= 0");
  if (windows == 0) throw ConfigError("windows must be >= 1");
  if (out.empty()) throw ConfigError("out must name a directory");
  ScaleSizes();
}

SimulationConfig ExperimentConfig::Simulation() const {
  SimulationConfig sim;
  sim.hp.alpha = alpha;
  sim.hp.lambda_w = lambda_w;
  sim.hp.lambda_v = lambda_v;
  sim.hp.k = K;
  sim.hp.max_neighbors = N;
  sim.hp.epochs = T;
  sim.hp.epsilon = epsilon;
  try {
    sim.codec = FixedPointCodec(ell, l_f);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("codec: ") + e.what());
  }
  sim.batch_size = B;
  sim.agg_mode = agg_mode == "sum" ? AggregationMode::kSum
                                   : AggregationMode::kMean;
  sim.scheduler = scheduler == "concurrent" ? SchedulerMode::kConcurrent
                                            : SchedulerMode::kDeterministic;
  sim.dgd_schedule = dgd_schedule == "per_epoch" ? DgdSchedule::kPerEpoch
                                                 : DgdSchedule::kPerSample;
  sim.plaintext = plaintext;
  sim.seed = seed;
  sim.threads = threads;
  sim.init_range = init_range;
  sim.record_transcript = transcript;
  return sim;
}

SyntheticSpec ExperimentConfig::Synthetic() const {
  SyntheticSpec spec;
  spec.users = synthetic_users;
  spec.items = synthetic_items;
  spec.user_features = synthetic_user_features;
  spec.item_features = synthetic_item_features;
  spec.samples = synthetic_samples;
  spec.k = K;
  spec.separability = synthetic_separability;
  spec.popularity_skew = synthetic_popularity_skew;
  spec.user_heterogeneity = synthetic_user_heterogeneity;
  spec.with_locations = synthetic_locations;
  spec.seed = seed;
  return spec;
}

SplitSpec ExperimentConfig::Splitting() const {
  SplitSpec spec;
  spec.train_fraction = train_fraction;
  spec.seed = seed;
  spec.repetitions = repetitions;
  return spec;
}

MixingMode ExperimentConfig::Mixing() const {
  return mixing == "paper_literal" ? MixingMode::kPaperLiteral
                                   : MixingMode::kRowStochastic;
}

MatchConfig ExperimentConfig::Matching() const {
  MatchConfig match;
  match.strategy =
      matching == "geo_radius" ? MatchStrategy::kGeoRadius : MatchStrategy::kAll;
  match.radius_km = radius;
  return match;
}

std::vector<std::size_t> ExperimentConfig::ScaleSizes() const {
  std::vector<std::size_t> sizes;
  for (const std::string& field : csv::SplitLine(scale_sizes)) {
    auto v = csv::ParseInt(field);
    if (!v || *v <= 0) BadValue("scale_sizes", scale_sizes, "a list of sizes");
    sizes.push_back(static_cast<std::size_t>(*v));
  }
  return sizes;
}

}  // namespace prirec
