// SPDX-License-Identifier: Apache-2.0
//
// thzpl - sub-THz directional path-loss modelling toolkit
// Copyright (C) 2026 The thzpl authors
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

#ifndef THZPL_ERRORS_HPP
#define THZPL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace thzpl
{
    // Every failure the library reports carries one of these codes
    enum class ErrorCode
    {
        DimensionMismatch,
        NonFiniteSample,
        NonPositiveDistance,
        InvalidBand,
        InvalidGrid,
        InvalidConfig,
        BandMismatch,
        DivisionByZero,
        ZeroSignal,
        InvalidBeamCount,
        DomainError,
        EmptyDataset,
        MixedFrequency,
        DegenerateGeometry,
        RankDeficient,
        UnstableSlope,
        ZeroVariance,
        UnknownScenario,
        ParseError,
        SchemaVersion,
        IoError,
        Locked
    };

    std::string_view error_code_name(ErrorCode code);

    // Process exit status used by the command-line frontend
    // 2 parse, 3 rank-deficient, 4 domain, 5 io
    int exit_status(ErrorCode code);

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message)
            : std::runtime_error(message), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };
}

#endif
