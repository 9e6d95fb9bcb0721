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

// Command-line experiment runner.
//
//   prirec train --config exp.cfg --N 0 --B 1
//   prirec eval --out run1 --split test
//   prirec predict --out run1 --user 7 --k 5

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "prirec/commands.h"
#include "prirec/config.h"

namespace {

prirec::ExperimentConfig Resolve(const std::string& config_file,
                                 const std::map<std::string, std::string>& set,
                                 const CLI::App& app) {
  prirec::ExperimentConfig config;
  if (!config_file.empty()) config = prirec::LoadConfigFile(config_file);
  for (const auto& [key, value] : set) {
    if (app.count("--" + key) > 0) prirec::SetConfigValue(config, key, value);
  }
  config.Validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving POI recommendation simulator"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "key = value config file");
  std::map<std::string, std::string> overrides;
  for (std::string_view key : prirec::ConfigKeys()) {
    const std::string name(key);
    std::string flags = "--" + name;
    if (name == "agg_mode") flags += ",--agg-mode";
    if (prirec::IsFlagKey(name)) {
      app.add_flag(flags + "{true}", overrides[name])
          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    } else {
      app.add_option(flags, overrides[name]);
    }
  }

  auto* gen = app.add_subcommand("gen-features",
                                 "append LDP dynamic features to items.csv");
  auto* train = app.add_subcommand("train", "train and write models");
  bool grid = false;
  train->add_flag("--grid", grid, "sweep alpha and lambda over 1e-4..1e0");
  auto* eval = app.add_subcommand("eval", "AUC and loss of trained models");
  std::string split = "test";
  eval->add_option("--split", split, "train or test");
  auto* predict = app.add_subcommand("predict", "top-k items for one user");
  prirec::UserId user = 0;
  std::size_t k = 5;
  predict->add_option("--user", user)->required();
  predict->add_option("--k", k);
  auto* scale = app.add_subcommand("scale", "training time per data size");
  for (CLI::App* sub : {gen, train, eval, predict, scale}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const prirec::ExperimentConfig config =
        Resolve(config_file, overrides, app);
    if (gen->parsed()) {
      prirec::CmdGenFeatures(config, std::cout);
    } else if (train->parsed()) {
      if (grid) {
        prirec::CmdTrainGrid(config, std::cout);
      } else {
        prirec::CmdTrain(config, std::cout);
      }
    } else if (eval->parsed()) {
      prirec::CmdEval(config, split, std::cout);
    } else if (predict->parsed()) {
      prirec::CmdPredict(config, user, k, std::cout);
    } else if (scale->parsed()) {
      prirec::CmdScale(config, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "prirec: " << e.what() << '\n';
    return prirec::ExitCodeFor(e);
  }
  return 0;
}
