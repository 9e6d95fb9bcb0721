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

#include "prirec/metrics.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "prirec/errors.h"
#include "prirec/fm.h"

namespace prirec {

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ArgumentError("scores and labels differ in length");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw ArgumentError("AUC labels must be 0 or 1");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney U from the positives' rank sum, tied groups sharing their
  // mean rank.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        positive_rank_sum += mean_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetricError("AUC needs at least one positive and one negative");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double AverageLoss(std::span<const double> predictions,
                   std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw ArgumentError("predictions and labels differ in length");
  }
  if (predictions.empty()) throw ArgumentError("empty loss input");
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += Loss(labels[i], predictions[i]);
  }
  return total / static_cast<double>(predictions.size());
}

}  // namespace prirec
