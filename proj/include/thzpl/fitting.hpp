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

#ifndef THZPL_FITTING_HPP
#define THZPL_FITTING_HPP

#include "thzpl/core_types.hpp"
#include "thzpl/models.hpp"

#include <optional>
#include <span>
#include <vector>

namespace thzpl
{
    struct Dataset
    {
        std::vector<PathLossSample> samples;

        // Distinct frequencies (exact match) with their sample counts, ascending
        std::vector<FrequencyCount> frequency_counts() const;
    };

    struct FitReport
    {
        PathLossModel model;
        std::vector<double> observed_db;  // input order
        std::vector<double> residuals_db; // observed - predicted, input order
        double sigma_sf_db = 0.0;         // RMS residual, population convention
        std::optional<double> r_squared;     // clamped to [0, 1]
        std::optional<double> r_squared_raw; // 1 - SS_res / SS_tot as computed
        std::size_t n_samples = 0;
        std::optional<double> condition_number; // design matrix, multi-band fits only
    };

    // Regressors whose design matrix condition number exceeds this are rank deficient
    inline constexpr double kMaxConditionNumber = 1e10;

    // Closed-form MMSE path loss exponent about FSPL(d0) at f_ghz.
    // Throws MixedFrequency when a sample sits at another frequency and
    // DegenerateGeometry when every distance equals d0.
    FitReport fit_ci(const Dataset &data, double f_ghz);

    // Least squares on [10 log10(d/d0), 1, 10 log10(f/f0)]
    FitReport fit_abg(const Dataset &data);

    // Least squares on PL - FSPL(f, d0) against [10 log10(d/d0), 10 (f - f_avg)/f_avg log10(d/d0)],
    // with f_avg weighted by the dataset's own sample counts
    FitReport fit_cif(const Dataset &data);

    // 1 - sum(r^2) / sum((y - mean y)^2); throws ZeroVariance for constant or single-sample data
    double goodness_of_fit(std::span<const double> observed_db, std::span<const double> residuals_db);
    double goodness_of_fit(const FitReport &report);

    double rms(std::span<const double> values);
}

#endif
