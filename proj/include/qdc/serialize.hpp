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

#include <string>

#include <nlohmann/json.hpp>

#include "qdc/lssvm.hpp"
#include "qdc/qsvm.hpp"
#include "qdc/types.hpp"

namespace qdc {

using json = nlohmann::json;

/// C99 hexadecimal float text ("0x1.8p+1"); round-trips every double
/// bit-for-bit, including signed zero, infinities and NaN.
std::string hexfloat(double v);
double parse_hexfloat(const std::string& s);

json to_hex_json(const RVector& v);
json to_hex_json(const RMatrix& m);
RVector vector_from_hex_json(const json& j);
RMatrix matrix_from_hex_json(const json& j);

/// j[key] as a double, accepting a JSON number or a hex-float string.
double number_field(const json& j, const char* key, double fallback);

json to_json(const KernelSpec& k);
KernelSpec kernel_from_json(const json& j);

json to_json(const InversionMode& mode);
InversionMode inversion_mode_from_json(const json& j);

/// Throws kConfigError naming the first key of `obj` not in `allowed`.
void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where);

/// FNV-1a 64-bit hash; stable across platforms and runs.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace qdc
