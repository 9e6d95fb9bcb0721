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

#ifndef PRIREC_ERRORS_H_
#define PRIREC_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prirec {

// Value outside the representable fixed-point range (checked mode only).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Malformed arguments: mismatched dimensions, unknown parties, bad sizes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid experiment configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent input data. Maps to CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;

  DataError(const std::string& file, std::size_t row, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(row) + ": " + what),
        row_(row) {}

  // 1-based line number in the offending file, 0 when not row-specific.
  std::size_t row() const { return row_; }

 private:
  std::size_t row_ = 0;
};

// Lookup of an unknown user or item.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Any failure inside a secure protocol exchange. Maps to CLI exit code 4.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reconstruction attempted without every party's share.
class IncompleteSharesError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// A secure-aggregation batch is missing at least one contributor, so the
// pairwise masks cannot cancel.
class AggregationIncompleteError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace prirec

#endif  // PRIREC_ERRORS_H_
