// SPDX-License-Identifier: Apache-2.0
//
// ectcap - capacity bounds for noncoherent underspread OFDM WSSUS fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace ectcap {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonPSD,
    NoSuchLag,
    DegenerateEstimation,
    InvalidBeta,
    InvalidThreshold,
    NonZeroMean,
    Numerical,
};

/// Exception carrying a machine-readable error code next to the message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

    static const char *code_name(ErrorCode c) {
        switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonPSD: return "NonPSD";
        case ErrorCode::NoSuchLag: return "NoSuchLag";
        case ErrorCode::DegenerateEstimation: return "DegenerateEstimation";
        case ErrorCode::InvalidBeta: return "InvalidBeta";
        case ErrorCode::InvalidThreshold: return "InvalidThreshold";
        case ErrorCode::NonZeroMean: return "NonZeroMean";
        case ErrorCode::Numerical: return "Numerical";
        }
        return "Unknown";
    }

  private:
    ErrorCode code_;
};

} // namespace ectcap
