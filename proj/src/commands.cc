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

#include "prirec/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "prirec/csv.h"
#include "prirec/errors.h"
#include "prirec/ldp.h"
#include "prirec/metrics.h"

namespace prirec {

namespace fs = std::filesystem;

namespace {

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("missing file " + path.string());
  return in;
}

void MakeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

DatasetPaths PathsIn(const fs::path& dir, const std::string& interactions) {
  return {(dir / "users.csv").string(), (dir / "items.csv").string(),
          (dir / interactions).string()};
}

NeighborGraph BuildGraph(const ExperimentConfig& config,
                         const Dataset& dataset) {
  const bool geo = config.graph == "geo" ||
                   (config.graph == "auto" && dataset.HasUserLocations());
  NeighborGraph graph;
  if (geo) {
    if (!dataset.HasUserLocations()) {
      throw ConfigError("graph = geo needs a location for every user");
    }
    const std::vector<UserLocation> locations = dataset.UserLocations();
    graph = BuildGeoGraph(locations, config.N);
  } else {
    const std::vector<UserId> users = dataset.UserIds();
    graph = BuildRandomGraph(users, config.N, config.seed);
  }
  return MixingWeights(graph, config.Mixing());
}

void WriteTraffic(std::ostream& out, const TrafficStats& traffic) {
  out << "kind,messages,bytes\n";
  for (const MessageKindInfo& info : AllMessageKinds()) {
    const KindTraffic& t = traffic.Of(info.kind);
    out << info.name << ',' << t.messages << ',' << t.bytes << '\n';
  }
}

std::string GridLabel(double x) {
  return csv::FormatDouble(x);
}

}  // namespace

Dataset LoadOrGenerate(const ExperimentConfig& config) {
  config.Validate();
  Dataset dataset;
  if (config.synthetic()) {
    dataset = GenerateSynthetic(config.Synthetic()).dataset;
  } else {
    dataset = LoadDataset({config.users, config.items, config.interactions});
  }
  if (config.negative_ratio > 0) {
    std::vector<Interaction> positives;
    for (const Interaction& x : dataset.interactions()) {
      if (x.label == 1) positives.push_back(x);
    }
    const std::vector<ItemId> items = dataset.ItemIds();
    NegativeSamplingResult sampled =
        NegativeSample(positives, config.negative_ratio, items, config.seed);
    dataset = dataset.WithInteractions(std::move(sampled.interactions));
  }
  if (config.filter_min_users > 0) {
    dataset = dataset.FilterItemsByUserCount(config.filter_min_users);
  }
  return dataset;
}

std::vector<TimeWindow> EqualWindows(std::span<const InteractionEvent> events,
                                     std::size_t count) {
  if (count <= 1 || events.empty()) return {TimeWindow{}};
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const InteractionEvent& e : events) {
    lo = std::min(lo, e.timestamp);
    hi = std::max(hi, e.timestamp);
  }
  const std::int64_t span = hi - lo + 1;
  std::vector<TimeWindow> windows;
  for (std::size_t w = 0; w < count; ++w) {
    const auto c = static_cast<std::int64_t>(count);
    const auto i = static_cast<std::int64_t>(w);
    windows.push_back({lo + span * i / c, lo + span * (i + 1) / c});
  }
  return windows;
}

PreparedData Prepare(const ExperimentConfig& config, const Dataset& base,
                     std::size_t repetition) {
  PreparedData data;
  SplitResult split = Split(base.interactions(), config.Splitting(), repetition);
  data.train = std::move(split.train);
  data.test = std::move(split.test);
  data.dataset = base;
  if (config.dynamic_features) {
    // Only training interactions are reported, so test labels never leak.
    const std::vector<InteractionEvent> events = PositiveEvents(data.train);
    DynamicFeatureOptions options;
    options.windows = EqualWindows(events, config.windows);
    options.seed = DeriveSeed(config.seed, {repetition});
    const std::vector<UserId> users = base.UserIds();
    const std::vector<ItemId> items = base.ItemIds();
    data.dataset = base.WithDynamicFeatures(BuildDynamicFeatures(
        users, items, events, RandomizedResponse(config.epsilon), options));
  }
  data.graph = BuildGraph(config, data.dataset);
  return data;
}

TrainOutcome TrainOnce(const ExperimentConfig& config, const Dataset& base,
                       std::size_t repetition) {
  TrainOutcome outcome;
  outcome.data = Prepare(config, base, repetition);
  const Dataset& ds = outcome.data.dataset;
  const std::vector<Sample> train = ds.MakeSamples(outcome.data.train);
  const std::vector<Sample> test = ds.MakeSamples(outcome.data.test);
  const std::vector<UserId> users = ds.UserIds();
  outcome.result = RunTraining(config.Simulation(), outcome.data.graph, users,
                               ds.feature_dim(), train, test);
  return outcome;
}

void WriteTrainOutputs(const ExperimentConfig& config,
                       const TrainOutcome& outcome, const fs::path& dir) {
  MakeDirectory(dir);
  const PreparedData& data = outcome.data;
  const TrainingResult& result = outcome.result;
  WriteDataset(data.dataset, PathsIn(dir, "interactions.csv"));
  WriteInteractions(data.train, (dir / "train.csv").string());
  WriteInteractions(data.test, (dir / "test.csv").string());
  {
    std::ofstream out = OpenOutput(dir / "metrics.csv");
    WriteMetricsCsv(out, result.metrics);
  }
  {
    std::ofstream out = OpenOutput(dir / "linear_models.csv");
    WriteLinearModelsCsv(out, result.linear_models);
  }
  {
    std::ofstream out = OpenOutput(dir / "interaction_model.csv");
    WriteInteractionModelCsv(out, result.interaction_model);
  }
  {
    std::ofstream out = OpenOutput(dir / "graph.csv");
    data.graph.WriteCsv(out);
  }
  {
    std::ofstream out = OpenOutput(dir / "traffic.csv");
    WriteTraffic(out, result.traffic);
  }
  if (config.transcript) {
    std::ofstream rounds = OpenOutput(dir / "dgd_transcript.csv");
    WriteDgdTranscriptCsv(rounds, result.dgd_transcript);
    std::ofstream batches = OpenOutput(dir / "batch_transcript.csv");
    WriteBatchTranscriptCsv(batches, result.batch_transcript);
  }
  ExperimentConfig effective = config;
  effective.out = dir.string();
  std::ofstream out = OpenOutput(dir / "config.txt");
  WriteConfig(out, effective);
}

void CmdGenFeatures(const ExperimentConfig& config, std::ostream& out) {
  config.Validate();
  if (config.synthetic()) {
    throw ConfigError("gen-features needs users, items and interactions");
  }
  const Dataset dataset =
      LoadDataset({config.users, config.items, config.interactions});
  const std::vector<InteractionEvent> events =
      PositiveEvents(dataset.interactions());
  if (events.empty()) {
    throw DataError(config.interactions, 0, "no positive interactions");
  }
  DynamicFeatureOptions options;
  options.windows = EqualWindows(events, config.windows);
  options.seed = config.seed;
  const std::vector<UserId> users = dataset.UserIds();
  const std::vector<ItemId> items = dataset.ItemIds();
  const DynamicFeatures features = BuildDynamicFeatures(
      users, items, events, RandomizedResponse(config.epsilon), options);
  WriteItems(dataset.WithDynamicFeatures(features), config.items);
  out << "wrote " << features.column_names.size() << " dynamic feature column"
      << (features.column_names.size() == 1 ? "" : "s") << " to "
      << config.items << '\n';
}

void CmdTrain(const ExperimentConfig& config, std::ostream& out) {
  const Dataset base = LoadOrGenerate(config);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    const fs::path dir = config.repetitions == 1
                             ? fs::path(config.out)
                             : fs::path(config.out) / ("rep" + std::to_string(r));
    const TrainOutcome outcome = TrainOnce(config, base, r);
    WriteTrainOutputs(config, outcome, dir);
    out << "repetition " << r << ": " << outcome.data.train.size()
        << " train / " << outcome.data.test.size() << " test samples";
    if (!outcome.result.metrics.empty()) {
      const EpochMetrics& last = outcome.result.metrics.back();
      out << ", train_loss " << csv::FormatFixed(last.train_loss, 6)
          << ", test_loss " << csv::FormatFixed(last.test_loss, 6) << ", auc "
          << csv::FormatFixed(last.auc, 6);
    }
    out << " -> " << dir.string() << '\n';
  }
}

void CmdTrainGrid(const ExperimentConfig& config, std::ostream& out) {
  static constexpr double kGrid[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  const Dataset base = LoadOrGenerate(config);
  const fs::path root(config.out);
  MakeDirectory(root);
  std::ofstream summary = OpenOutput(root / "grid.csv");
  summary << "alpha,lambda,train_loss,test_loss,auc\n";
  out << "alpha,lambda,train_loss,test_loss,auc\n";
  for (double alpha : kGrid) {
    for (double lambda : kGrid) {
      ExperimentConfig run = config;
      run.alpha = alpha;
      run.lambda_w = lambda;
      run.lambda_v = lambda;
      const fs::path dir =
          root / ("alpha_" + GridLabel(alpha) + "_lambda_" + GridLabel(lambda));
      std::string row = GridLabel(alpha) + ',' + GridLabel(lambda);
      try {
        const TrainOutcome outcome = TrainOnce(run, base, 0);
        WriteTrainOutputs(run, outcome, dir);
        EpochMetrics last;
        last.train_loss = last.test_loss = last.auc =
            std::numeric_limits<double>::quiet_NaN();
        if (!outcome.result.metrics.empty()) {
          last = outcome.result.metrics.back();
        }
        row += ',' + csv::FormatFixed(last.train_loss, 6) + ',' +
               csv::FormatFixed(last.test_loss, 6) + ',' +
               csv::FormatFixed(last.auc, 6);
      } catch (const ProtocolError&) {
        // Large steps can push a model outside the fixed-point range.
        row += ",nan,nan,nan";
      }
      summary << row << '\n';
      out << row << '\n';
    }
  }
}

EvalReport CmdEval(const ExperimentConfig& config, const std::string& split,
                   std::ostream& out) {
  if (split != "train" && split != "test") {
    throw ConfigError("split must be train or test, got '" + split + "'");
  }
  const fs::path dir(config.out);
  const Dataset dataset = LoadDataset(PathsIn(dir, split + ".csv"));
  std::ifstream linear_in = OpenInput(dir / "linear_models.csv");
  std::ifstream v_in = OpenInput(dir / "interaction_model.csv");
  const auto models = ReadLinearModelsCsv(linear_in);
  const InteractionModel v = ReadInteractionModelCsv(v_in);
  if (v.feature_dim() != dataset.feature_dim()) {
    throw DataError("interaction model has " +
                    std::to_string(v.feature_dim()) + " rows, data has " +
                    std::to_string(dataset.feature_dim()) + " features");
  }
  const std::vector<Sample> samples =
      dataset.MakeSamples(dataset.interactions());
  EvalReport report;
  report.samples = samples.size();
  report.loss = report.auc = std::numeric_limits<double>::quiet_NaN();
  if (!samples.empty()) {
    const std::vector<double> scores = PredictSamples(samples, models, v);
    std::vector<int> signed_labels;
    std::vector<int> binary_labels;
    for (const Sample& s : samples) {
      signed_labels.push_back(s.label);
      binary_labels.push_back(s.label > 0 ? 1 : 0);
    }
    report.loss = AverageLoss(scores, signed_labels);
    try {
      report.auc = Auc(scores, binary_labels);
    } catch (const UndefinedMetricError&) {
    }
  }
  out << "split,samples,auc,loss\n"
      << split << ',' << report.samples << ','
      << csv::FormatFixed(report.auc, 6) << ','
      << csv::FormatFixed(report.loss, 6) << '\n';
  return report;
}

std::vector<ScoredItem> CmdPredict(const ExperimentConfig& config, UserId user,
                                   std::size_t k, std::ostream& out) {
  const fs::path dir(config.out);
  const Dataset dataset = LoadDataset(PathsIn(dir, "train.csv"));
  std::ifstream linear_in = OpenInput(dir / "linear_models.csv");
  std::ifstream v_in = OpenInput(dir / "interaction_model.csv");
  const Recommender recommender(dataset, ReadLinearModelsCsv(linear_in),
                                ReadInteractionModelCsv(v_in));
  const std::vector<ScoredItem> top =
      recommender.Predict(user, k, config.Matching());
  out << "rank,item_id,score\n";
  for (std::size_t r = 0; r < top.size(); ++r) {
    out << r + 1 << ',' << top[r].item << ','
        << csv::FormatDouble(top[r].score) << '\n';
  }
  return top;
}

void CmdScale(const ExperimentConfig& config, std::ostream& out) {
  config.Validate();
  if (!config.synthetic()) {
    throw ConfigError("scale generates synthetic data; drop dataset paths");
  }
  const fs::path root(config.out);
  MakeDirectory(root);
  std::ofstream csv_out = OpenOutput(root / "scale.csv");
  csv_out << "size,seconds\n";
  out << "size,seconds\n";
  for (std::size_t size : config.ScaleSizes()) {
    ExperimentConfig run = config;
    // The split keeps train_fraction of the rows, so generate enough for
    // `size` training samples.
    run.synthetic_samples = static_cast<std::size_t>(
        std::ceil(static_cast<double>(size) / config.train_fraction));
    const Dataset base = LoadOrGenerate(run);
    const PreparedData data = Prepare(run, base, 0);
    std::vector<Sample> train = data.dataset.MakeSamples(data.train);
    train.resize(std::min(train.size(), size));
    const std::vector<UserId> users = data.dataset.UserIds();
    const auto start = std::chrono::steady_clock::now();
    RunTraining(run.Simulation(), data.graph, users, data.dataset.feature_dim(),
                train, {});
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    const std::string row =
        std::to_string(train.size()) + ',' + csv::FormatFixed(elapsed.count(), 6);
    csv_out << row << '\n';
    out << row << std::endl;
  }
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const ArgumentError*>(&e) != nullptr) {
    return 2;
  }
  if (dynamic_cast<const DataError*>(&e) != nullptr ||
      dynamic_cast<const NotFoundError*>(&e) != nullptr) {
    return 3;
  }
  if (dynamic_cast<const ProtocolError*>(&e) != nullptr) return 4;
  return 1;
}

}  // namespace prirec
