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

#ifndef THZPL_EXTRACTION_HPP
#define THZPL_EXTRACTION_HPP

#include "thzpl/core_types.hpp"

#include <vector>

namespace thzpl
{
    struct BeamEntry
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
        double avg_magnitude = 0.0; // linear amplitude, averaged over the sweep
    };

    // Per-direction averaged CTF magnitudes, strongest first, plus the
    // placement context every extracted sample inherits
    struct BeamTable
    {
        std::vector<BeamEntry> entries;
        double distance_m = 0.0;
        double frequency_ghz = 0.0;
        Scenario scenario = Scenario::MeetingRoom;
        std::string scan_id;
    };

    struct ExtractionOptions
    {
        FrequencyMode frequency_mode = FrequencyMode::Nominal;
        // Zero every direction whose average magnitude is below the sounder noise floor
        bool noise_gate = false;
    };

    // avg_magnitude = (1/S) * sum_s |H(i, j, s)|, sorted descending.
    // Ties are ordered by (azimuth, elevation).
    BeamTable beam_average(const DirectionalScan &scan, const ExtractionOptions &options = {});

    // Sort order used by beam_average; exposed for tables built by hand
    void sort_beams(std::vector<BeamEntry> &entries);

    PathLossSample best_direction_pl(const BeamTable &table);
    PathLossSample omni_pl(const BeamTable &table);
    PathLossSample combine_coherent(const BeamTable &table, int n);
    PathLossSample combine_noncoherent(const BeamTable &table, int n);

    // Best, omni and both combinations for n = 1..max_beams (clamped to the table length)
    std::vector<PathLossSample> extract_all(const BeamTable &table, int max_beams);
}

#endif
