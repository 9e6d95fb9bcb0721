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

#include "prirec/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>

#include "prirec/csv.h"
#include "prirec/errors.h"
#include "prirec/metrics.h"
#include "prirec/protocol_dgd.h"
#include "prirec/random.h"

namespace prirec {

namespace {

struct Device {
  UserId id = 0;
  LinearModel model;
  const NeighborRow* row = nullptr;
  std::mutex mu;
};

struct PendingBatch {
  std::map<UserId, InteractionModel> gradients;
  std::size_t samples = 0;
};

// Accumulated by one worker, merged after every epoch.
struct WorkerLog {
  TrafficStats traffic;
  std::vector<DgdRoundRecord> rounds;
  std::vector<BatchRecord> batches;
};

std::uint64_t SampleNonce(std::size_t epoch, std::size_t position) {
  return DeriveSeed(0, {epoch, position});
}

std::uint64_t EpochConsensusNonce(std::size_t epoch) {
  return DeriveSeed(1, {epoch});
}

class Trainer {
 public:
  Trainer(const SimulationConfig& config, const NeighborGraph& graph,
          std::span<const UserId> users, std::size_t feature_dim)
      : config_(config), feature_dim_(feature_dim) {
    for (UserId u : users) {
      auto device = std::make_unique<Device>();
      device->id = u;
      device->model = LinearModel(feature_dim);
      device->row = &graph.Row(u);
      if (!devices_.emplace(u, std::move(device)).second) {
        throw ArgumentError("duplicate user " + std::to_string(u));
      }
    }
    v_ = InitialInteractionModel(feature_dim, config);
  }

  TrainingResult Run(std::span<const Sample> train,
                     std::span<const Sample> test) {
    for (const Sample& s : train) CheckSample(s);
    for (const Sample& s : test) CheckSample(s);

    TrainingResult result;
    for (std::size_t epoch = 1; epoch <= config_.hp.epochs; ++epoch) {
      const std::vector<std::size_t> order =
          EpochOrder(config_.seed, epoch, train.size());
      std::vector<WorkerLog> logs;
      if (config_.scheduler == SchedulerMode::kConcurrent) {
        logs = RunConcurrentEpoch(train, order, epoch);
      } else {
        logs.resize(1);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
          ProcessSample(train[order[pos]], epoch, pos, logs[0]);
        }
      }
      // A partial batch at the end of the epoch is aggregated as is.
      PendingBatch tail = TakePending();
      if (tail.samples > 0) FlushBatch(std::move(tail), logs[0]);
      if (config_.dgd_schedule == DgdSchedule::kPerEpoch) {
        EpochConsensus(epoch, logs[0]);
      }
      for (WorkerLog& log : logs) {
        result.traffic.Merge(log.traffic);
        if (config_.record_transcript) {
          for (auto& r : log.rounds) result.dgd_transcript.push_back(r);
          for (auto& b : log.batches) result.batch_transcript.push_back(b);
        }
      }
      result.samples_processed += train.size();
      result.metrics.push_back(Evaluate(epoch, train, test));
    }
    if (config_.record_transcript) {
      std::sort(result.dgd_transcript.begin(), result.dgd_transcript.end(),
                [](const auto& a, const auto& b) { return a.round < b.round; });
      std::sort(result.batch_transcript.begin(), result.batch_transcript.end(),
                [](const auto& a, const auto& b) { return a.batch < b.batch; });
    }
    result.dgd_rounds = next_round_.load();
    result.server_updates = server_updates_.load();
    result.linear_models = Models();
    result.interaction_model = v_;
    return result;
  }

 private:
  void CheckSample(const Sample& s) const {
    if (!devices_.contains(s.user)) {
      throw ArgumentError("sample references user " + std::to_string(s.user) +
                          " without a device");
    }
    if (s.x.size() != feature_dim_) {
      throw ArgumentError("sample feature length " +
                          std::to_string(s.x.size()) + ", expected " +
                          std::to_string(feature_dim_));
    }
  }

  Device& DeviceOf(UserId u) { return *devices_.at(u); }

  std::map<UserId, LinearModel> Models() {
    std::map<UserId, LinearModel> out;
    for (auto& [id, device] : devices_) {
      std::lock_guard lock(device->mu);
      out.emplace(id, device->model);
    }
    return out;
  }

  std::vector<WorkerLog> RunConcurrentEpoch(std::span<const Sample> train,
                                            const std::vector<std::size_t>& order,
                                            std::size_t epoch) {
    const std::size_t workers = std::max<std::size_t>(1, config_.threads);
    std::vector<WorkerLog> logs(workers);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t pos = next++; pos < order.size() && !failed;
                 pos = next++) {
              ProcessSample(train[order[pos]], epoch, pos, logs[w]);
            }
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            failed = true;
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
    return logs;
  }

  void ProcessSample(const Sample& sample, std::size_t epoch,
                     std::size_t position, WorkerLog& log) {
    try {
      Device& device = DeviceOf(sample.user);

      // Pull V from the recommender.
      InteractionModel v_snapshot;
      {
        Transport transport(config_.codec.ring());
        {
          std::shared_lock lock(v_mu_);
          transport.Send({kServerParty, sample.user, InteractionModelPull{v_}});
        }
        auto inbox = transport.Collect(sample.user);
        v_snapshot = std::move(std::get<InteractionModelPull>(
                                   inbox.front().payload).model);
        log.traffic.Merge(transport.stats());
      }
      LinearModel w_snapshot;
      {
        std::lock_guard lock(device.mu);
        w_snapshot = device.model;
      }

      SampleGradients g =
          ComputeGradients(sample, w_snapshot, v_snapshot, config_.hp);

      if (config_.dgd_schedule == DgdSchedule::kPerSample) {
        const std::vector<double> weighted =
            ConsensusSum(device, SampleNonce(epoch, position), log);
        LinearModel next =
            DgdUpdate(w_snapshot, g.linear, weighted, config_.hp.alpha);
        std::lock_guard lock(device.mu);
        device.model = std::move(next);
      } else {
        std::lock_guard lock(device.mu);
        device.model = DgdUpdate(device.model, g.linear, device.model.weights,
                                 config_.hp.alpha);
      }

      EnqueueGradient(sample.user, std::move(g.interaction), log);
    } catch (const ProtocolError& e) {
      throw ProtocolError("epoch " + std::to_string(epoch) + ", sample " +
                          std::to_string(position) + ": " + e.what());
    }
  }

  // sum_f S_if w^f over the center's participants: itself when it carries
  // a self weight, then its neighbors.
  std::vector<double> ConsensusSum(Device& center, std::uint64_t nonce,
                                   WorkerLog& log) {
    const NeighborRow& row = *center.row;
    std::vector<std::vector<double>> models;
    DgdRound round;
    round.center = center.id;
    round.nonce = nonce;
    if (row.self_weight != 0.0) {
      std::lock_guard lock(center.mu);
      models.push_back(center.model.weights);
      round.participants.push_back({center.id, row.self_weight, {}});
    }
    for (const Neighbor& n : row.neighbors) {
      Device& other = DeviceOf(n.id);
      std::lock_guard lock(other.mu);
      models.push_back(other.model.weights);
      round.participants.push_back({n.id, n.weight, {}});
    }
    if (round.participants.empty()) {
      return std::vector<double>(feature_dim_ + 1, 0.0);
    }
    for (std::size_t p = 0; p < models.size(); ++p) {
      round.participants[p].model = models[p];
    }
    const std::uint64_t round_id = next_round_++;
    if (config_.plaintext) return PlaintextWeightedSum(round);

    TrafficStats traffic;
    std::vector<double> sum = SecureWeightedSum(round, config_.codec,
                                                config_.seed, {&traffic, {}});
    log.traffic.Merge(traffic);
    if (config_.record_transcript) {
      log.rounds.push_back({round_id, center.id, round.participants.size(),
                            traffic.TotalMessages(), traffic.TotalBytes()});
    }
    return sum;
  }

  void EpochConsensus(std::size_t epoch, WorkerLog& log) {
    for (auto& [id, device] : devices_) {
      const std::vector<double> weighted =
          ConsensusSum(*device, DeriveSeed(EpochConsensusNonce(epoch),
                                           {static_cast<std::uint64_t>(id)}),
                       log);
      std::lock_guard lock(device->mu);
      device->model.weights = weighted;
    }
  }

  void EnqueueGradient(UserId user, InteractionModel grad, WorkerLog& log) {
    PendingBatch full;
    {
      std::lock_guard lock(pending_mu_);
      auto [it, inserted] = pending_.gradients.try_emplace(user, std::move(grad));
      if (!inserted) {
        // A device with several samples in one batch submits their sum.
        auto acc = it->second.values();
        const auto add = grad.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += add[i];
      }
      if (++pending_.samples < config_.batch_size) return;
      full = std::exchange(pending_, PendingBatch{});
    }
    FlushBatch(std::move(full), log);
  }

  PendingBatch TakePending() {
    std::lock_guard lock(pending_mu_);
    return std::exchange(pending_, PendingBatch{});
  }

  void FlushBatch(PendingBatch batch, WorkerLog& log) {
    const std::uint64_t batch_id = next_batch_++;
    InteractionModel aggregate(feature_dim_, config_.hp.k);
    TrafficStats traffic;
    if (config_.plaintext) {
      for (const auto& [user, grad] : batch.gradients) {
        auto acc = aggregate.values();
        const auto add = grad.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += add[i];
      }
    } else {
      std::vector<PartyId> contributors;
      for (const auto& [user, grad] : batch.gradients) {
        contributors.push_back(user);
      }
      const AggregationBatch setup =
          AggregationBatch::Form(batch_id, contributors, config_.seed);
      Transport transport(config_.codec.ring());
      for (const auto& [user, grad] : batch.gradients) {
        MaskedGradient m = MaskGradient(grad, user, setup, config_.codec);
        transport.Send({user, kServerParty,
                        MaskedGradientMessage{batch_id, std::move(m.masked)}});
      }
      std::vector<MaskedGradient> received;
      for (Envelope& e : transport.Collect(kServerParty)) {
        auto& msg = std::get<MaskedGradientMessage>(e.payload);
        received.push_back(
            {e.from, feature_dim_, config_.hp.k, std::move(msg.masked)});
      }
      aggregate = Aggregate(received, setup, config_.codec);
      traffic = transport.stats();
    }
    {
      std::unique_lock lock(v_mu_);
      v_ = ServerUpdate(v_, aggregate, config_.hp.alpha, batch.samples,
                        config_.agg_mode);
      ++server_updates_;
    }
    log.traffic.Merge(traffic);
    if (config_.record_transcript) {
      log.batches.push_back({batch_id, batch.gradients.size(), batch.samples,
                             traffic.TotalMessages(), traffic.TotalBytes()});
    }
  }

  EpochMetrics Evaluate(std::size_t epoch, std::span<const Sample> train,
                        std::span<const Sample> test) {
    const std::map<UserId, LinearModel> models = Models();
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = std::numeric_limits<double>::quiet_NaN();
    m.test_loss = std::numeric_limits<double>::quiet_NaN();
    m.auc = std::numeric_limits<double>::quiet_NaN();
    auto labels_of = [](std::span<const Sample> s, bool binary) {
      std::vector<int> out;
      out.reserve(s.size());
      for (const Sample& x : s) out.push_back(binary ? (x.label > 0) : x.label);
      return out;
    };
    if (!train.empty()) {
      m.train_loss = AverageLoss(PredictSamples(train, models, v_),
                                 labels_of(train, false));
    }
    if (!test.empty()) {
      const std::vector<double> scores = PredictSamples(test, models, v_);
      m.test_loss = AverageLoss(scores, labels_of(test, false));
      try {
        m.auc = Auc(scores, labels_of(test, true));
      } catch (const UndefinedMetricError&) {
      }
    }
    return m;
  }

  const SimulationConfig& config_;
  const std::size_t feature_dim_;
  std::map<UserId, std::unique_ptr<Device>> devices_;
  InteractionModel v_;
  std::shared_mutex v_mu_;
  PendingBatch pending_;
  std::mutex pending_mu_;
  std::atomic<std::uint64_t> next_round_{0};
  std::atomic<std::uint64_t> next_batch_{0};
  std::atomic<std::uint64_t> server_updates_{0};
};

void RequireHeaderPrefix(const std::vector<std::string>& header,
                         std::string_view first, std::size_t row) {
  if (header.empty() || header[0] != first) {
    throw DataError("model file", row,
                    "expected first column '" + std::string(first) + "'");
  }
}

}  // namespace

void SimulationConfig::Validate() const {
  hp.Validate();
  if (batch_size == 0) throw ConfigError("batch size B must be >= 1");
  if (scheduler == SchedulerMode::kConcurrent && threads == 0) {
    throw ConfigError("concurrent scheduler needs at least one thread");
  }
  if (!(init_range >= 0.0)) throw ConfigError("init_range must be >= 0");
}

std::vector<std::size_t> EpochOrder(std::uint64_t seed, std::size_t epoch,
                                    std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeStream(seed, StreamTag::kEpochShuffle, {epoch});
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

InteractionModel InitialInteractionModel(std::size_t feature_dim,
                                         const SimulationConfig& config) {
  InteractionModel v(feature_dim, config.hp.k);
  Rng rng = MakeStream(config.seed, StreamTag::kInitInteractionModel);
  std::uniform_real_distribution<double> init(-config.init_range,
                                              config.init_range);
  for (double& x : v.values()) x = init(rng);
  return v;
}

TrainingResult RunTraining(const SimulationConfig& config,
                           const NeighborGraph& graph,
                           std::span<const UserId> users,
                           std::size_t feature_dim,
                           std::span<const Sample> train,
                           std::span<const Sample> test) {
  config.Validate();
  Trainer trainer(config, graph, users, feature_dim);
  return trainer.Run(train, test);
}

std::vector<double> PredictSamples(
    std::span<const Sample> samples,
    const std::map<UserId, LinearModel>& linear_models,
    const InteractionModel& v) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) {
    auto it = linear_models.find(s.user);
    if (it == linear_models.end()) {
      throw NotFoundError("no linear model for user " + std::to_string(s.user));
    }
    out.push_back(Predict(s.x, it->second, v));
  }
  return out;
}

void WriteMetricsCsv(std::ostream& out, std::span<const EpochMetrics> metrics) {
  out << "epoch,train_loss,test_loss,auc\n";
  for (const EpochMetrics& m : metrics) {
    out << m.epoch << ',' << csv::FormatFixed(m.train_loss, 6) << ','
        << csv::FormatFixed(m.test_loss, 6) << ',' << csv::FormatFixed(m.auc, 6)
        << '\n';
  }
}

void WriteLinearModelsCsv(std::ostream& out,
                          const std::map<UserId, LinearModel>& models) {
  std::size_t width = 0;
  for (const auto& [id, m] : models) width = std::max(width, m.weights.size());
  out << "user_id";
  for (std::size_t d = 0; d < width; ++d) out << ",w" << d;
  out << '\n';
  for (const auto& [id, m] : models) {
    out << id;
    for (double w : m.weights) out << ',' << csv::FormatDouble(w);
    out << '\n';
  }
}

void WriteInteractionModelCsv(std::ostream& out, const InteractionModel& v) {
  out << "feature_index";
  for (std::size_t f = 0; f < v.k(); ++f) out << ",k" << f;
  out << '\n';
  for (std::size_t d = 0; d < v.feature_dim(); ++d) {
    out << d;
    for (double x : v.Row(d)) out << ',' << csv::FormatDouble(x);
    out << '\n';
  }
}

void WriteDgdTranscriptCsv(std::ostream& out,
                           std::span<const DgdRoundRecord> rounds) {
  out << "round,center,participants,messages,bytes\n";
  for (const DgdRoundRecord& r : rounds) {
    out << r.round << ',' << r.center << ',' << r.participants << ','
        << r.messages << ',' << r.bytes << '\n';
  }
}

void WriteBatchTranscriptCsv(std::ostream& out,
                             std::span<const BatchRecord> batches) {
  out << "batch,contributors,samples,messages,bytes\n";
  for (const BatchRecord& b : batches) {
    out << b.batch << ',' << b.contributors << ',' << b.samples << ','
        << b.messages << ',' << b.bytes << '\n';
  }
}

std::map<UserId, LinearModel> ReadLinearModelsCsv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  if (!csv::ReadRow(in, line, row)) throw DataError("empty linear model file");
  RequireHeaderPrefix(csv::SplitLine(line), "user_id", row);
  std::map<UserId, LinearModel> out;
  while (csv::ReadRow(in, line, row)) {
    const std::vector<std::string> f = csv::SplitLine(line);
    auto id = csv::ParseInt(f[0]);
    if (!id) throw DataError("linear models", row, "bad user id");
    LinearModel m;
    for (std::size_t c = 1; c < f.size(); ++c) {
      auto v = csv::ParseDouble(f[c]);
      if (!v) throw DataError("linear models", row, "bad weight");
      m.weights.push_back(*v);
    }
    out[*id] = std::move(m);
  }
  return out;
}

InteractionModel ReadInteractionModelCsv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  if (!csv::ReadRow(in, line, row)) {
    throw DataError("empty interaction model file");
  }
  const std::vector<std::string> header = csv::SplitLine(line);
  RequireHeaderPrefix(header, "feature_index", row);
  const std::size_t k = header.size() - 1;
  std::vector<double> values;
  std::size_t rows = 0;
  while (csv::ReadRow(in, line, row)) {
    const std::vector<std::string> f = csv::SplitLine(line);
    if (f.size() != k + 1) {
      throw DataError("interaction model", row, "wrong field count");
    }
    for (std::size_t c = 1; c < f.size(); ++c) {
      auto v = csv::ParseDouble(f[c]);
      if (!v) throw DataError("interaction model", row, "bad value");
      values.push_back(*v);
    }
    ++rows;
  }
  if (k == 0) throw DataError("interaction model", 1, "no factor columns");
  return InteractionModel(rows, k, std::move(values));
}

Recommender::Recommender(const Dataset& dataset,
                         std::map<UserId, LinearModel> linear_models,
                         InteractionModel interaction_model)
    : dataset_(dataset),
      linear_models_(std::move(linear_models)),
      interaction_model_(std::move(interaction_model)) {}

std::vector<ItemId> Recommender::MatchCandidates(UserId user,
                                                 const MatchConfig& match) const {
  const UserRecord& u = dataset_.User(user);
  std::vector<ItemId> out;
  if (match.strategy == MatchStrategy::kAll) {
    for (const ItemRecord& j : dataset_.items()) out.push_back(j.id);
    return out;
  }
  if (!u.location) {
    throw ConfigError("geo_radius matching needs a location for user " +
                      std::to_string(user));
  }
  for (const ItemRecord& j : dataset_.items()) {
    if (!j.location) {
      throw ConfigError("geo_radius matching needs a location for item " +
                        std::to_string(j.id));
    }
    if (HaversineKm(*u.location, *j.location) <= match.radius_km) {
      out.push_back(j.id);
    }
  }
  return out;
}

std::vector<ScoredItem> Recommender::Predict(UserId user, std::size_t k,
                                             const MatchConfig& match,
                                             TrafficStats* traffic) const {
  auto model = linear_models_.find(user);
  if (model == linear_models_.end()) {
    throw NotFoundError("no trained model for user " + std::to_string(user));
  }
  const std::vector<ItemId> candidates = MatchCandidates(user, match);
  if (k == 0) return {};

  // The device's private features never leave it; public data is pulled.
  const std::vector<double>& user_features = dataset_.User(user).features;
  Transport transport(Ring(64));
  transport.Send({kServerParty, user, InteractionModelPull{interaction_model_}});
  for (ItemId j : candidates) {
    transport.Send(
        {kServerParty, user, ItemFeaturePull{j, dataset_.Item(j).features}});
  }
  InteractionModel v;
  std::vector<ScoredItem> scored;
  std::vector<double> x;
  for (Envelope& e : transport.Collect(user)) {
    if (auto* pull = std::get_if<InteractionModelPull>(&e.payload)) {
      v = std::move(pull->model);
      continue;
    }
    const auto& item = std::get<ItemFeaturePull>(e.payload);
    x = user_features;
    x.insert(x.end(), item.features.begin(), item.features.end());
    scored.push_back({item.item, prirec::Predict(x, model->second, v)});
  }
  if (traffic != nullptr) traffic->Merge(transport.stats());

  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(),
                    scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), [](const ScoredItem& a, const ScoredItem& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.item < b.item;
                    });
  scored.resize(take);
  return scored;
}

}  // namespace prirec
