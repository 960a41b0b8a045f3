// Copyright 2026 The qdeepclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdc/types.hpp"

namespace qdc {

struct Dataset {
  std::vector<std::string> columns;  // feature column names
  RMatrix x;
  std::optional<std::vector<int>> labels;
};

/// Splits one CSV record on commas and trims surrounding blanks. Quoting
/// is not supported.
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest-free "%.17g" rendering; parses back to the same double.
std::string format_double(double v);

/// Header row required; a column named "label" holds integer labels.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::string& path, const Dataset& data);

struct BlobSpec {
  int k = 3;
  int per_blob = 20;
  int dim = 8;
  double stddev = 1.0;
  double separation = 6.0;
  std::uint64_t seed = 1;
};

/// Isotropic Gaussian blobs with centres at mutual distance at least
/// separation * stddev. Rows are shuffled.
Dataset generate_blobs(const BlobSpec& spec);

}  // namespace qdc
