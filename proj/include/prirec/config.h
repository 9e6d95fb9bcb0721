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

// Experiment configuration: a flat key=value file plus --key value
// overrides. Every key is spelled exactly like the field it sets.

#ifndef PRIREC_CONFIG_H_
#define PRIREC_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "prirec/dataset.h"
#include "prirec/neighbor_graph.h"
#include "prirec/simulation.h"

namespace prirec {

struct ExperimentConfig {
  // Dataset files; when all three are empty a synthetic dataset is used.
  std::string users;
  std::string items;
  std::string interactions;

  std::size_t synthetic_users = 200;
  std::size_t synthetic_items = 50;
  std::size_t synthetic_user_features = 5;
  std::size_t synthetic_item_features = 5;
  std::size_t synthetic_samples = 5000;
  double synthetic_separability = 8.0;
  double synthetic_popularity_skew = 0.0;
  double synthetic_user_heterogeneity = 0.0;
  bool synthetic_locations = true;

  std::size_t negative_ratio = 0;
  std::size_t filter_min_users = 0;  // 0 disables item filtering
  double train_fraction = 0.8;
  std::size_t repetitions = 1;

  double alpha = 0.05;
  double lambda_w = 1e-4;
  double lambda_v = 1e-4;
  std::size_t K = 5;
  std::size_t N = 5;
  std::size_t T = 20;
  double epsilon = 1.0;
  int ell = 64;
  int l_f = 16;
  std::size_t B = 8;
  std::string agg_mode = "mean";            // sum | mean
  std::string mixing = "row_stochastic";    // row_stochastic | paper_literal
  std::string graph = "auto";               // auto | geo | random
  std::string scheduler = "deterministic";  // deterministic | concurrent
  std::size_t threads = 4;
  std::string dgd_schedule = "per_sample";  // per_sample | per_epoch
  bool plaintext = false;
  double init_range = 0.01;
  bool transcript = false;

  bool dynamic_features = false;
  std::size_t windows = 1;

  std::string matching = "all";  // all | geo_radius
  double radius = 10.0;

  std::size_t seed = 0;
  std::string out = "prirec_out";
  std::string scale_sizes = "10000,20000,40000";

  // Throws ConfigError on any invalid value.
  void Validate() const;

  bool synthetic() const {
    return users.empty() && items.empty() && interactions.empty();
  }
  SimulationConfig Simulation() const;
  SyntheticSpec Synthetic() const;
  SplitSpec Splitting() const;
  MixingMode Mixing() const;
  MatchConfig Matching() const;
  std::vector<std::size_t> ScaleSizes() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Every recognised key, in file order.
std::vector<std::string_view> ConfigKeys();
bool IsFlagKey(std::string_view key);

// Sets one key from its textual value; throws ConfigError for an unknown key
// or an unparsable value.
void SetConfigValue(ExperimentConfig& config, std::string_view key,
                    std::string_view value);
std::string GetConfigValue(const ExperimentConfig& config,
                           std::string_view key);

// "key = value" lines; '#' starts a comment. Later lines win.
void ReadConfig(std::istream& in, ExperimentConfig& config);
ExperimentConfig LoadConfigFile(const std::string& path);
// Writes every key, so the output reloads to an identical config.
void WriteConfig(std::ostream& out, const ExperimentConfig& config);

}  // namespace prirec

#endif  // PRIREC_CONFIG_H_
