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

// Training and prediction over simulated user devices and a recommender.
//
// Each device keeps its own linear model; the recommender keeps the
// interaction model. Per training sample the owning device pulls the
// interaction model, computes both gradients from that snapshot, updates its
// linear model through a secure DGD round with its neighbors and queues the
// interaction gradient. Every `batch_size` samples the queued gradients are
// securely aggregated and the recommender steps the interaction model.

#ifndef PRIREC_SIMULATION_H_
#define PRIREC_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <vector>

#include "prirec/dataset.h"
#include "prirec/fixed_point.h"
#include "prirec/fm.h"
#include "prirec/neighbor_graph.h"
#include "prirec/secure_aggregation.h"
#include "prirec/transport.h"

namespace prirec {

enum class SchedulerMode {
  // One logical timeline; bit-reproducible for a fixed seed.
  kDeterministic,
  // Worker threads process samples concurrently; DGD rounds stay isolated
  // per center and interaction-model updates are atomic.
  kConcurrent,
};

enum class DgdSchedule {
  kPerSample,  // one secure DGD round per training sample
  kPerEpoch,   // local steps per sample, one consensus round per user per epoch
};

struct SimulationConfig {
  Hyperparams hp;
  FixedPointCodec codec;
  std::size_t batch_size = 8;
  AggregationMode agg_mode = AggregationMode::kMean;
  SchedulerMode scheduler = SchedulerMode::kDeterministic;
  DgdSchedule dgd_schedule = DgdSchedule::kPerSample;
  // Skip sharing and masking; same update arithmetic in floating point.
  bool plaintext = false;
  std::uint64_t seed = 0;
  std::size_t threads = 4;
  // Interaction model entries start uniform in [-init_range, init_range].
  double init_range = 0.01;
  bool record_transcript = false;

  void Validate() const;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double auc = 0.0;  // NaN when the test split lacks a class
};

struct DgdRoundRecord {
  std::uint64_t round = 0;
  UserId center = 0;
  std::size_t participants = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

struct BatchRecord {
  std::uint64_t batch = 0;
  std::size_t contributors = 0;
  std::size_t samples = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

struct TrainingResult {
  std::map<UserId, LinearModel> linear_models;
  InteractionModel interaction_model;
  std::vector<EpochMetrics> metrics;
  TrafficStats traffic;
  std::vector<DgdRoundRecord> dgd_transcript;
  std::vector<BatchRecord> batch_transcript;
  std::uint64_t samples_processed = 0;
  std::uint64_t dgd_rounds = 0;
  std::uint64_t server_updates = 0;
};

// Permutation of [0, n) used for epoch `epoch` (1-based).
std::vector<std::size_t> EpochOrder(std::uint64_t seed, std::size_t epoch,
                                    std::size_t n);

// Initial interaction model for a run.
InteractionModel InitialInteractionModel(std::size_t feature_dim,
                                         const SimulationConfig& config);

// Runs `config.hp.epochs` epochs. Every sample's user must be in `users`,
// and `graph` must have a row for every user. Protocol failures propagate
// as ProtocolError annotated with the epoch and sample position.
TrainingResult RunTraining(const SimulationConfig& config,
                           const NeighborGraph& graph,
                           std::span<const UserId> users,
                           std::size_t feature_dim,
                           std::span<const Sample> train,
                           std::span<const Sample> test);

// Predictions with each sample's own user model.
std::vector<double> PredictSamples(
    std::span<const Sample> samples,
    const std::map<UserId, LinearModel>& linear_models,
    const InteractionModel& v);

void WriteMetricsCsv(std::ostream& out, std::span<const EpochMetrics> metrics);
void WriteLinearModelsCsv(std::ostream& out,
                          const std::map<UserId, LinearModel>& models);
void WriteInteractionModelCsv(std::ostream& out, const InteractionModel& v);
void WriteDgdTranscriptCsv(std::ostream& out,
                           std::span<const DgdRoundRecord> rounds);
void WriteBatchTranscriptCsv(std::ostream& out,
                             std::span<const BatchRecord> batches);

// Throw DataError on malformed input.
std::map<UserId, LinearModel> ReadLinearModelsCsv(std::istream& in);
InteractionModel ReadInteractionModelCsv(std::istream& in);

enum class MatchStrategy { kAll, kGeoRadius };

struct MatchConfig {
  MatchStrategy strategy = MatchStrategy::kAll;
  double radius_km = 10.0;
};

struct ScoredItem {
  ItemId item = 0;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

// Prediction for a single user: the device pulls the interaction model and
// the candidates' public features from the recommender and scores locally.
class Recommender {
 public:
  Recommender(const Dataset& dataset,
              std::map<UserId, LinearModel> linear_models,
              InteractionModel interaction_model);

  // kAll returns every item; kGeoRadius returns items within radius_km of
  // the user (inclusive). Throws ConfigError when locations are missing and
  // NotFoundError for an unknown user.
  std::vector<ItemId> MatchCandidates(UserId user,
                                      const MatchConfig& match) const;

  // Top-k candidates by score, descending, ties by ascending item id.
  std::vector<ScoredItem> Predict(UserId user, std::size_t k,
                                  const MatchConfig& match = {},
                                  TrafficStats* traffic = nullptr) const;

 private:
  const Dataset& dataset_;
  std::map<UserId, LinearModel> linear_models_;
  InteractionModel interaction_model_;
};

}  // namespace prirec

#endif  // PRIREC_SIMULATION_H_
