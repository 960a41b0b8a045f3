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

#include "qdc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "qdc/error.hpp"

namespace qdc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw Error(ErrorCode::kConfigError, "line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kConfigError, "dataset is empty");
  const std::vector<std::string> header = split_csv_line(line);
  Dataset d;
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col >= 0) throw Error(ErrorCode::kConfigError, "duplicate label column");
      label_col = static_cast<int>(c);
    } else {
      d.columns.push_back(header[c]);
    }
  }
  if (d.columns.empty()) throw Error(ErrorCode::kConfigError, "dataset has no feature columns");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kConfigError, "line " + std::to_string(lineno) + " has " +
                                               std::to_string(cells.size()) + " cells, header has " +
                                               std::to_string(header.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_number(cells[c], lineno);
      if (static_cast<int>(c) == label_col) {
        if (v != std::floor(v)) throw Error(ErrorCode::kConfigError, "non-integer label on line " + std::to_string(lineno));
        labels.push_back(static_cast<int>(v));
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kConfigError, "dataset has no rows");
  d.x.resize(static_cast<Index>(rows.size()), static_cast<Index>(d.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) d.x(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c];
  }
  if (label_col >= 0) d.labels = std::move(labels);
  return d;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t c = 0; c < data.columns.size(); ++c) out << (c ? "," : "") << data.columns[c];
  if (data.labels) out << ",label";
  out << '\n';
  for (Index i = 0; i < data.x.rows(); ++i) {
    for (Index c = 0; c < data.x.cols(); ++c) out << (c ? "," : "") << format_double(data.x(i, c));
    if (data.labels) out << ',' << (*data.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  write_dataset_csv(out, data);
}

Dataset generate_blobs(const BlobSpec& spec) {
  if (spec.k < 1 || spec.per_blob < 1 || spec.dim < 1) throw Error(ErrorCode::kConfigError, "blob counts must be positive");
  if (!(spec.stddev > 0.0) || !(spec.separation >= 0.0)) {
    throw Error(ErrorCode::kConfigError, "blob std must be > 0 and separation >= 0");
  }
  std::mt19937_64 rng(spec.seed);
  const double min_dist = spec.separation * spec.stddev;
  double half = std::max(min_dist, spec.stddev);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<RVector> centers;
  int rejects = 0;
  while (static_cast<int>(centers.size()) < spec.k) {
    RVector c(spec.dim);
    for (int t = 0; t < spec.dim; ++t) c[t] = half * unit(rng);
    const bool ok = std::all_of(centers.begin(), centers.end(),
                                [&](const RVector& o) { return (o - c).norm() >= min_dist; });
    if (ok) {
      centers.push_back(std::move(c));
    } else if (++rejects % 1000 == 0) {
      half *= 1.1;
    }
  }
  std::normal_distribution<double> noise(0.0, spec.stddev);
  const Index m = static_cast<Index>(spec.k) * spec.per_blob;
  RMatrix x(m, spec.dim);
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (int b = 0; b < spec.k; ++b) {
    for (int p = 0; p < spec.per_blob; ++p) {
      const Index row = static_cast<Index>(b) * spec.per_blob + p;
      for (int t = 0; t < spec.dim; ++t) x(row, t) = centers[static_cast<std::size_t>(b)][t] + noise(rng);
      labels[static_cast<std::size_t>(row)] = b;
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  Dataset d;
  for (int t = 0; t < spec.dim; ++t) d.columns.push_back("x" + std::to_string(t));
  d.x.resize(m, spec.dim);
  std::vector<int> shuffled(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    d.x.row(i) = x.row(order[static_cast<std::size_t>(i)]);
    shuffled[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }
  d.labels = std::move(shuffled);
  return d;
}

}  // namespace qdc
