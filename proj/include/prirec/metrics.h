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

#ifndef PRIREC_METRICS_H_
#define PRIREC_METRICS_H_

#include <span>
#include <stdexcept>

namespace prirec {

class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Probability that a random positive outscores a random negative, ties
// counted as 1/2. Labels are {0, 1}. O(n log n) via rank sums.
// Throws UndefinedMetricError unless both classes are present, and
// std::invalid_argument on length mismatch.
double Auc(std::span<const double> scores, std::span<const int> labels);

// Mean logistic loss; labels are {-1, +1}. Throws std::invalid_argument on
// empty input or length mismatch.
double AverageLoss(std::span<const double> predictions,
                   std::span<const int> labels);

}  // namespace prirec

#endif  // PRIREC_METRICS_H_
