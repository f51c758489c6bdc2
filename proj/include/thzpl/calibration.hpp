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

#ifndef THZPL_CALIBRATION_HPP
#define THZPL_CALIBRATION_HPP

#include "thzpl/core_types.hpp"

#include <complex>
#include <vector>

namespace thzpl
{
    // Back-to-back sounder measurement through a known attenuator
    struct CalibrationRecord
    {
        FrequencyBand band;
        std::vector<std::complex<double>> s_calibration; // S21 through the attenuator, per sweep point
        std::vector<std::complex<double>> h_attenuator;  // known attenuator response, per sweep point
    };

    // Throws DimensionMismatch on wrong vector lengths, DivisionByZero on a zero calibration sample
    void check_calibration(const CalibrationRecord &cal);

    // H_channel = S_measured * H_attenuator / S_calibration at every sweep point.
    // No smoothing or windowing; metadata of the raw scan is carried over unchanged.
    DirectionalScan calibrate(const DirectionalScan &raw, const CalibrationRecord &cal);
}

#endif
