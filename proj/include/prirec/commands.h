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

// Experiment pipeline shared by the command-line tool and the tests: data
// preparation, training runs, output files and the five subcommands.

#ifndef PRIREC_COMMANDS_H_
#define PRIREC_COMMANDS_H_

#include <cstddef>
#include <exception>
#include <filesystem>
#include <ostream>
#include <vector>

#include "prirec/config.h"
#include "prirec/dataset.h"
#include "prirec/neighbor_graph.h"
#include "prirec/simulation.h"

namespace prirec {

// Dataset from files, or generated when the config names none. Applies
// negative sampling and item filtering.
Dataset LoadOrGenerate(const ExperimentConfig& config);

// `count` equal-width windows covering every event timestamp.
std::vector<TimeWindow> EqualWindows(std::span<const InteractionEvent> events,
                                     std::size_t count);

struct PreparedData {
  // Items carry dynamic features when enabled.
  Dataset dataset;
  std::vector<Interaction> train;
  std::vector<Interaction> test;
  NeighborGraph graph;
};

// Split for `repetition`, dynamic features from the training split only,
// neighbor graph with the configured mixing.
PreparedData Prepare(const ExperimentConfig& config, const Dataset& base,
                     std::size_t repetition);

struct TrainOutcome {
  PreparedData data;
  TrainingResult result;
};

TrainOutcome TrainOnce(const ExperimentConfig& config, const Dataset& base,
                       std::size_t repetition);

// Data, splits, models, metrics, traffic and the effective config.
void WriteTrainOutputs(const ExperimentConfig& config,
                       const TrainOutcome& outcome,
                       const std::filesystem::path& dir);

struct EvalReport {
  double auc = 0.0;  // NaN when the split lacks a class
  double loss = 0.0;
  std::size_t samples = 0;
};

// Subcommands. Output files go under config.out; human-readable results are
// printed to `out`.
void CmdGenFeatures(const ExperimentConfig& config, std::ostream& out);
void CmdTrain(const ExperimentConfig& config, std::ostream& out);
// Sweeps alpha and lambda over {1e-4, ..., 1e0}.
void CmdTrainGrid(const ExperimentConfig& config, std::ostream& out);
// `split` is "train" or "test".
EvalReport CmdEval(const ExperimentConfig& config, const std::string& split,
                   std::ostream& out);
std::vector<ScoredItem> CmdPredict(const ExperimentConfig& config, UserId user,
                                   std::size_t k, std::ostream& out);
// size,seconds per entry of config.scale_sizes.
void CmdScale(const ExperimentConfig& config, std::ostream& out);

// 2 config, 3 data, 4 protocol, 1 anything else.
int ExitCodeFor(const std::exception& e);

}  // namespace prirec

#endif  // PRIREC_COMMANDS_H_
