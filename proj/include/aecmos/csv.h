// Copyright 2026 The aecmos Authors. All Rights Reserved.
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

#ifndef AECMOS_CSV_H_
#define AECMOS_CSV_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace aecmos {

// Minimal RFC 4180 reader/writer: comma separated, optional double quotes
// with "" escapes, first row is the header.
class CsvTable {
 public:
  static absl::StatusOr<CsvTable> Parse(std::string_view text);
  static absl::StatusOr<CsvTable> Read(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::optional<size_t> Column(std::string_view name) const;
  // Fails with SchemaInvalid naming the missing column.
  absl::StatusOr<size_t> RequireColumn(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trip decimal form of a double.
std::string FormatDouble(double value);

}  // namespace aecmos

#endif  // AECMOS_CSV_H_
