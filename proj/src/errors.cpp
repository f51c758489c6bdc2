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

#include "thzpl/errors.hpp"

namespace thzpl
{
    std::string_view error_code_name(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
        case ErrorCode::InvalidBand: return "InvalidBand";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::BandMismatch: return "BandMismatch";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::ZeroSignal: return "ZeroSignal";
        case ErrorCode::InvalidBeamCount: return "InvalidBeamCount";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::MixedFrequency: return "MixedFrequency";
        case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::UnstableSlope: return "UnstableSlope";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaVersion: return "SchemaVersion";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Locked: return "Locked";
        }
        return "Unknown";
    }

    int exit_status(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::ParseError:
        case ErrorCode::SchemaVersion:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonFiniteSample:
        case ErrorCode::NonPositiveDistance:
        case ErrorCode::InvalidBand:
        case ErrorCode::InvalidGrid:
        case ErrorCode::InvalidConfig:
            return 2;
        case ErrorCode::RankDeficient:
        case ErrorCode::DegenerateGeometry:
        case ErrorCode::UnstableSlope:
            return 3;
        case ErrorCode::IoError:
        case ErrorCode::Locked:
            return 5;
        default:
            return 4;
        }
    }
}
