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

#include "qdc/cost_model.hpp"

#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qdc/dataset.hpp"
#include "qdc/error.hpp"

namespace qdc {
namespace {

void require_count(double v, const char* name) {
  if (!(v >= 1.0) || v != std::floor(v) || !std::isfinite(v)) {
    throw Error(ErrorCode::kBadSizes, std::string(name) + " must be a positive integer");
  }
}

void require_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::kBadSizes, std::string(name) + " must lie in (0, 1)");
}

struct Column {
  const char* name;
  std::function<double&(CostParams&)> field;
};

const std::vector<Column>& numeric_columns() {
  static const std::vector<Column> cols = {
      {"M", [](CostParams& p) -> double& { return p.m; }},
      {"M_max", [](CostParams& p) -> double& { return p.m_max; }},
      {"N", [](CostParams& p) -> double& { return p.n; }},
      {"g", [](CostParams& p) -> double& { return p.g; }},
      {"v", [](CostParams& p) -> double& { return p.v; }},
      {"l", [](CostParams& p) -> double& { return p.l; }},
      {"L", [](CostParams& p) -> double& { return p.cnn_layers; }},
      {"Gr", [](CostParams& p) -> double& { return p.gr; }},
      {"K", [](CostParams& p) -> double& { return p.k_clusters; }},
      {"N_features", [](CostParams& p) -> double& { return p.n_features; }},
      {"eps", [](CostParams& p) -> double& { return p.eps; }},
      {"eps_K", [](CostParams& p) -> double& { return p.eps_k; }},
      {"eps_KMeans", [](CostParams& p) -> double& { return p.eps_kmeans; }},
      {"delta", [](CostParams& p) -> double& { return p.delta; }},
      {"eps_gd", [](CostParams& p) -> double& { return p.eps_gd; }},
      {"t0", [](CostParams& p) -> double& { return p.t0; }},
      {"T_conv", [](CostParams& p) -> double& { return p.t_conv; }},
  };
  return cols;
}

std::string join_sizes(const std::vector<double>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? ";" : "") + format_double(sizes[i]);
  return s;
}

std::vector<double> parse_sizes(const std::string& cell) {
  std::vector<double> out;
  std::stringstream ss(cell);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfigError, "bad layer size '" + part + "'");
    }
  }
  return out;
}

bool parse_bool(const std::string& cell) {
  if (cell == "1" || cell == "true") return true;
  if (cell == "0" || cell == "false" || cell.empty()) return false;
  throw Error(ErrorCode::kConfigError, "bad boolean '" + cell + "'");
}

}  // namespace

void CostParams::validate() const {
  require_count(m, "M");
  require_count(m_max, "M_max");
  require_count(n, "N");
  require_count(g, "g");
  require_count(v, "v");
  require_count(l, "l");
  require_count(cnn_layers, "L");
  require_count(gr, "Gr");
  require_count(k_clusters, "K");
  require_count(n_features, "N_features");
  if (m_max > m) throw Error(ErrorCode::kBadSizes, "M_max must not exceed M");
  require_unit_open(eps, "eps");
  require_unit_open(eps_k, "eps_K");
  require_unit_open(eps_kmeans, "eps_KMeans");
  require_unit_open(delta, "delta");
  require_unit_open(eps_gd, "eps_gd");
  if (!(t0 > 0.0)) throw Error(ErrorCode::kBadSizes, "t0 must be > 0");
  if (!(t_conv >= 0.0)) throw Error(ErrorCode::kBadSizes, "T_conv must be >= 0");
  if (!layer_sizes.empty()) {
    for (double s : layer_sizes) require_count(s, "layer size");
    if (static_cast<double>(layer_sizes.size()) - 1.0 != cnn_layers) {
      throw Error(ErrorCode::kBadSizes, "layer_sizes must list L + 1 sizes");
    }
  }
}

CnnCounts cnn_counts(const std::vector<double>& n) {
  if (n.size() < 2) throw Error(ErrorCode::kBadSizes, "need sizes n0..nL with L >= 1");
  for (double s : n) require_count(s, "layer size");
  CnnCounts c;
  c.n_mul = n[1] * n[0];
  for (std::size_t l = 2; l < n.size(); ++l) c.n_mul += n[l] * n[l - 1] * n[l - 2];
  for (std::size_t l = 1; l < n.size(); ++l) c.n_act += n[l];
  c.t_forward = c.n_mul + c.n_act;
  return c;
}

ClassicalCosts classical_costs(const CostParams& p) {
  p.validate();
  return {p.gr * p.cnn_layers * p.n * p.n * p.n + p.t_conv,
          (p.v + 1.0) * p.l * p.g * p.g * p.m * p.m * p.m,
          p.k_clusters * p.m * p.n_features};
}

QuantumCosts quantum_costs(const CostParams& p) {
  const ClassicalCosts c = classical_costs(p);
  const double layers = (p.v + 1.0) * p.l;
  const double t_q2 = layers * p.g * p.g * std::log2(p.m_max * p.n) +
                      layers * std::pow(p.g, 1.5) * std::log2(1.0 / p.delta) / p.eps +
                      layers * std::log2(p.g);
  const double kmeans_log = std::log2(p.k_clusters * p.m * p.n_features);
  const double t_q3 = p.well_separated ? p.eps_kmeans * kmeans_log : p.eps_kmeans * p.k_clusters * kmeans_log;
  return {c.t_c1, t_q2, t_q3};
}

CostReport cost_report(const CostParams& p) {
  const ClassicalCosts c = classical_costs(p);
  const QuantumCosts q = quantum_costs(p);
  CostReport r;
  if (!p.layer_sizes.empty()) r.cnn = cnn_counts(p.layer_sizes);
  r.t_back = p.gr * p.cnn_layers * p.n * p.n * p.n;
  r.t_c1 = c.t_c1;
  r.t_c2 = c.t_c2;
  r.t_c3 = c.t_c3;
  r.t_q1 = q.t_q1;
  r.t_q2 = q.t_q2;
  r.t_q3 = q.t_q3;
  const double layers = (p.v + 1.0) * p.l;
  r.t_q2_qpe = layers * p.g * p.g * std::log2(p.m_max * p.n) / (p.eps_k * p.eps_k * p.eps * p.eps * p.eps) +
               layers * std::pow(p.g, 1.5) * std::log2(1.0 / p.delta) / p.eps + layers * std::log2(p.g);
  r.pairs = p.g * (p.g - 1.0) / 2.0;
  r.eps_gd = p.eps_gd;
  r.total_classical = r.t_c1 + r.t_c2 + r.t_c3;
  r.total_quantum = r.t_q1 + r.t_q2 + r.t_q3;
  r.speedup_svm = r.t_c2 / r.t_q2;
  r.speedup_kmeans = r.t_q3 > 0.0 ? r.t_c3 / r.t_q3 : 0.0;
  r.speedup_total = r.total_classical / r.total_quantum;
  return r;
}

json to_json(const CostParams& p) {
  json j;
  CostParams copy = p;
  for (const Column& c : numeric_columns()) j[c.name] = c.field(copy);
  j["layer_sizes"] = p.layer_sizes;
  j["well_separated"] = p.well_separated;
  return j;
}

CostParams cost_params_from_json(const json& j) {
  std::vector<const char*> allowed;
  for (const Column& c : numeric_columns()) allowed.push_back(c.name);
  CostParams p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "layer_sizes") {
      p.layer_sizes = it->get<std::vector<double>>();
      continue;
    }
    if (key == "well_separated") {
      p.well_separated = it->get<bool>();
      continue;
    }
    bool found = false;
    for (const Column& c : numeric_columns()) {
      if (key == c.name) {
        c.field(p) = number_field(j, c.name, 0.0);
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kConfigError, "cost params: unknown key '" + key + "'");
  }
  if (!j.contains("L") && !p.layer_sizes.empty()) p.cnn_layers = static_cast<double>(p.layer_sizes.size()) - 1.0;
  p.validate();
  return p;
}

json to_json(const CostReport& r) {
  return json{{"units", "model"},
              {"n_mul", r.cnn.n_mul},
              {"n_act", r.cnn.n_act},
              {"T_forward", r.cnn.t_forward},
              {"T_back", r.t_back},
              {"T_C1", r.t_c1},
              {"T_C2", r.t_c2},
              {"T_C3", r.t_c3},
              {"T_q1", r.t_q1},
              {"T_q2", r.t_q2},
              {"T_q3", r.t_q3},
              {"T_q2_qpe", r.t_q2_qpe},
              {"pairs", r.pairs},
              {"eps_gd", r.eps_gd},
              {"total_classical", r.total_classical},
              {"total_quantum", r.total_quantum},
              {"speedup_svm", r.speedup_svm},
              {"speedup_kmeans", r.speedup_kmeans},
              {"speedup_total", r.speedup_total}};
}

std::vector<CostParams> read_cost_sweep(std::istream& in, const CostParams& defaults) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kConfigError, "sweep CSV is empty");
  const std::vector<std::string> header = split_csv_line(line);
  for (const std::string& h : header) {
    bool known = h == "layer_sizes" || h == "well_separated";
    for (const Column& c : numeric_columns()) known = known || h == c.name;
    if (!known) throw Error(ErrorCode::kConfigError, "sweep CSV: unknown column '" + h + "'");
  }
  std::vector<CostParams> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kConfigError, "sweep CSV line " + std::to_string(lineno) + " has the wrong cell count");
    }
    CostParams p = defaults;
    bool has_l = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "layer_sizes") {
        p.layer_sizes = parse_sizes(cells[i]);
      } else if (header[i] == "well_separated") {
        p.well_separated = parse_bool(cells[i]);
      } else {
        has_l = has_l || header[i] == "L";
        for (const Column& c : numeric_columns()) {
          if (header[i] != c.name) continue;
          try {
            c.field(p) = std::stod(cells[i]);
          } catch (const std::exception&) {
            throw Error(ErrorCode::kConfigError, "sweep CSV line " + std::to_string(lineno) + ": bad number '" +
                                                     cells[i] + "'");
          }
        }
      }
    }
    if (!has_l && !p.layer_sizes.empty()) p.cnn_layers = static_cast<double>(p.layer_sizes.size()) - 1.0;
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

void write_cost_report_csv(std::ostream& out, const std::vector<CostParams>& params,
                           const std::vector<CostReport>& reports) {
  if (params.size() != reports.size()) throw Error(ErrorCode::kInvalidArgument, "params/report count mismatch");
  for (const Column& c : numeric_columns()) out << c.name << ',';
  out << "layer_sizes,well_separated";
  const json sample = to_json(CostReport{});
  std::vector<std::string> keys;
  for (auto it = sample.begin(); it != sample.end(); ++it) {
    if (it.key() != "units") keys.push_back(it.key());
  }
  for (const std::string& k : keys) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < params.size(); ++i) {
    CostParams p = params[i];
    for (const Column& c : numeric_columns()) out << format_double(c.field(p)) << ',';
    out << join_sizes(p.layer_sizes) << ',' << (p.well_separated ? 1 : 0);
    const json r = to_json(reports[i]);
    for (const std::string& k : keys) out << ',' << format_double(r.at(k).get<double>());
    out << '\n';
  }
}

}  // namespace qdc
