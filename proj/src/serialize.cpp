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

#include "qdc/serialize.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>

#include "qdc/error.hpp"

namespace qdc {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kConfigError, "malformed float '" + s + "'");
  }
  return v;
}

json to_hex_json(const RVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(hexfloat(v[i]));
  return arr;
}

json to_hex_json(const RMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) rows.push_back(to_hex_json(RVector(m.row(r).transpose())));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

RVector vector_from_hex_json(const json& j) {
  RVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = parse_hexfloat(j[i].get<std::string>());
  }
  return v;
}

RMatrix matrix_from_hex_json(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  RMatrix m(rows, cols);
  const json& data = j.at("data");
  if (static_cast<Index>(data.size()) != rows) {
    throw Error(ErrorCode::kConfigError, "matrix row count mismatch");
  }
  for (Index r = 0; r < rows; ++r) {
    const RVector row = vector_from_hex_json(data[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw Error(ErrorCode::kConfigError, "matrix column count mismatch");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_json(const KernelSpec& k) {
  switch (k.kind) {
    case KernelSpec::Kind::kLinear:
      return json{{"kind", "linear"}};
    case KernelSpec::Kind::kRbf:
      return json{{"kind", "rbf"}, {"gamma", hexfloat(k.gamma)}};
    case KernelSpec::Kind::kPolynomial:
      return json{{"kind", "polynomial"}, {"degree", k.degree}, {"coef", hexfloat(k.coef)}};
  }
  return {};
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) return parse_hexfloat(v.get<std::string>());
  if (!v.is_number()) throw Error(ErrorCode::kConfigError, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

KernelSpec kernel_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "gamma", "degree", "coef"}, "kernel");
  const std::string kind = j.value("kind", "linear");
  KernelSpec k;
  if (kind == "linear") {
    k = KernelSpec::linear();
  } else if (kind == "rbf") {
    k.kind = KernelSpec::Kind::kRbf;
    k.gamma = number_field(j, "gamma", 1.0);
  } else if (kind == "polynomial") {
    k.kind = KernelSpec::Kind::kPolynomial;
    k.degree = j.value("degree", 2);
    k.coef = number_field(j, "coef", 1.0);
  } else {
    throw Error(ErrorCode::kConfigError, "unknown kernel kind '" + kind + "'");
  }
  try {
    k.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  return k;
}

json to_json(const InversionMode& mode) {
  if (mode.kind == InversionMode::Kind::kExactSpectral) return json{{"kind", "exact_spectral"}};
  return json{{"kind", "qpe"}, {"clock_bits", mode.clock_bits}, {"t0", hexfloat(mode.t0)}};
}

InversionMode inversion_mode_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "clock_bits", "t0"}, "inversion mode");
  const std::string kind = j.value("kind", "exact_spectral");
  if (kind == "exact_spectral") return InversionMode::exact_spectral();
  if (kind == "qpe") return InversionMode::qpe(j.value("clock_bits", 12), number_field(j, "t0", 0.0));
  throw Error(ErrorCode::kConfigError, "unknown inversion mode '" + kind + "'");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::kConfigError, where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&key](const char* a) { return key == a; });
    if (!ok) throw Error(ErrorCode::kConfigError, "unknown key '" + key + "' in " + where);
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qdc
