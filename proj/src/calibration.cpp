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

#include "thzpl/calibration.hpp"

#include <cmath>
#include <string>

namespace thzpl
{
    void check_calibration(const CalibrationRecord &cal)
    {
        check_band(cal.band);
        if (cal.s_calibration.size() != cal.band.n_points || cal.h_attenuator.size() != cal.band.n_points)
            throw Error(ErrorCode::DimensionMismatch,
                        "calibration vectors have " + std::to_string(cal.s_calibration.size()) + "/" +
                            std::to_string(cal.h_attenuator.size()) + " points, band has " +
                            std::to_string(cal.band.n_points));
        for (std::size_t s = 0; s < cal.s_calibration.size(); ++s)
        {
            if (std::abs(cal.s_calibration[s]) == 0.0)
                throw Error(ErrorCode::DivisionByZero, "calibration sample " + std::to_string(s) + " is zero");
            if (!std::isfinite(std::abs(cal.s_calibration[s])) || !std::isfinite(std::abs(cal.h_attenuator[s])))
                throw Error(ErrorCode::NonFiniteSample, "calibration sample " + std::to_string(s) + " is not finite");
        }
    }

    DirectionalScan calibrate(const DirectionalScan &raw, const CalibrationRecord &cal)
    {
        if (!raw.config.band.same_sweep(cal.band))
            throw Error(ErrorCode::BandMismatch,
                        "calibration band '" + cal.band.label + "' does not match scan band '" + raw.config.band.label + "'");
        check_calibration(cal);
        if (raw.s21.n_frequency() != cal.band.n_points)
            throw Error(ErrorCode::DimensionMismatch, "scan frequency axis does not match the calibration band");

        std::vector<std::complex<double>> correction(cal.band.n_points);
        for (std::size_t s = 0; s < correction.size(); ++s)
            correction[s] = cal.h_attenuator[s] / cal.s_calibration[s];

        DirectionalScan out = raw;
        auto &values = out.s21.values();
        const std::size_t n_freq = out.s21.n_frequency();
        for (std::size_t k = 0; k < values.size(); ++k)
            values[k] *= correction[k % n_freq];
        return out;
    }
}
