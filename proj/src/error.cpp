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

#include "qdc/error.hpp"

namespace qdc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZERO_VECTOR";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kNotNormalized: return "NOT_NORMALIZED";
    case ErrorCode::kNonHermitian: return "NON_HERMITIAN";
    case ErrorCode::kAllFiltered: return "ALL_FILTERED";
    case ErrorCode::kBadLabels: return "BAD_LABELS";
    case ErrorCode::kSingularSystem: return "SINGULAR_SYSTEM";
    case ErrorCode::kEmptyClass: return "EMPTY_CLASS";
    case ErrorCode::kBadSeeds: return "BAD_SEEDS";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kNonFinite: return "NON_FINITE";
    case ErrorCode::kBadSizes: return "BAD_SIZES";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kConfigError: return "CONFIG_ERROR";
    case ErrorCode::kIoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

bool is_numerical(ErrorCode code) {
  return code == ErrorCode::kSingularSystem || code == ErrorCode::kAllFiltered ||
         code == ErrorCode::kNonFinite;
}

}  // namespace qdc
