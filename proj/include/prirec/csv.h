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

// Minimal unquoted CSV: comma separated, '.' decimal point, header row.

#ifndef PRIREC_CSV_H_
#define PRIREC_CSV_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prirec::csv {

std::vector<std::string> SplitLine(std::string_view line);

std::optional<double> ParseDouble(std::string_view field);
std::optional<std::int64_t> ParseInt(std::string_view field);

// Shortest representation that round-trips exactly.
std::string FormatDouble(double value);
// Fixed notation with `decimals` digits after the point.
std::string FormatFixed(double value, int decimals);

std::string Join(const std::vector<std::string>& fields);

// Reads the next non-empty line, stripping a trailing '\r'. Returns false at
// end of input. `line_number` is advanced past every line consumed.
bool ReadRow(std::istream& in, std::string& line, std::size_t& line_number);

}  // namespace prirec::csv

#endif  // PRIREC_CSV_H_
