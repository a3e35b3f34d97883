// Copyright 2026 The qpg Authors
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

#include "qpg/error.h"

namespace qpg {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroNorm:
            return "ZeroNorm";
        case ErrorCode::NotNormalized:
            return "NotNormalized";
        case ErrorCode::NonFinite:
            return "NonFinite";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::InvalidOccupation:
            return "InvalidOccupation";
        case ErrorCode::InvalidParams:
            return "InvalidParams";
        case ErrorCode::NonPositiveVolume:
            return "NonPositiveVolume";
        case ErrorCode::OutOfRange:
            return "OutOfRange";
        case ErrorCode::ZeroCoupling:
            return "ZeroCoupling";
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::NotCZ:
            return "NotCZ";
        case ErrorCode::ConfigParse:
            return "ConfigParse";
        case ErrorCode::ConfigValidation:
            return "ConfigValidation";
        case ErrorCode::IoFailure:
            return "IoFailure";
        case ErrorCode::InvariantFailure:
            return "InvariantFailure";
    }
    return "Unknown";
}

}  // namespace qpg
