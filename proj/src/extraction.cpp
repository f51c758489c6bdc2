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

#include "thzpl/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thzpl
{
    namespace
    {
        PathLossSample make_sample(const BeamTable &table, double pl_db, PlKind kind)
        {
            return PathLossSample{table.distance_m, table.frequency_ghz, pl_db, kind, table.scenario, table.scan_id};
        }

        void check_beam_count(const BeamTable &table, int n)
        {
            if (n < 1 || static_cast<std::size_t>(n) > table.entries.size())
                throw Error(ErrorCode::InvalidBeamCount, "beam count " + std::to_string(n) + " outside [1, " +
                                                             std::to_string(table.entries.size()) + "]");
        }

        double power_sum(const BeamTable &table, std::size_t n)
        {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                sum += table.entries[k].avg_magnitude * table.entries[k].avg_magnitude;
            return sum;
        }

        // -10 log10(p) evaluated as -20 log10(sqrt(p)): sqrt(a * a) == a in IEEE arithmetic,
        // so a one-term power sum reproduces the single-beam loss bit for bit
        double power_to_db_loss(double power) { return -20.0 * std::log10(std::sqrt(power)); }
    }

    void sort_beams(std::vector<BeamEntry> &entries)
    {
        std::sort(entries.begin(), entries.end(), [](const BeamEntry &a, const BeamEntry &b)
                  {
                      if (a.avg_magnitude != b.avg_magnitude)
                          return a.avg_magnitude > b.avg_magnitude;
                      if (a.azimuth_deg != b.azimuth_deg)
                          return a.azimuth_deg < b.azimuth_deg;
                      return a.elevation_deg < b.elevation_deg; });
    }

    BeamTable beam_average(const DirectionalScan &scan, const ExtractionOptions &options)
    {
        validate_scan(scan);

        const auto &grid = scan.config.grid;
        const auto &cube = scan.s21;
        const double inv_s = 1.0 / static_cast<double>(cube.n_frequency());
        const double gate = options.noise_gate ? scan.config.noise_floor_amplitude() : 0.0;

        BeamTable table;
        table.distance_m = scan.distance_m;
        table.frequency_ghz = scan.config.band.representative_ghz(options.frequency_mode);
        table.scenario = scan.scenario;
        table.scan_id = scan.scan_id;
        table.entries.reserve(grid.size());

        for (std::size_t i = 0; i < cube.n_azimuth(); ++i)
            for (std::size_t j = 0; j < cube.n_elevation(); ++j)
            {
                double sum = 0.0;
                for (std::size_t s = 0; s < cube.n_frequency(); ++s)
                    sum += std::abs(cube.at(i, j, s));
                double avg = sum * inv_s;
                if (avg < gate)
                    avg = 0.0;
                table.entries.push_back({grid.azimuth_deg[i], grid.elevation_deg[j], avg});
            }
        sort_beams(table.entries);
        return table;
    }

    PathLossSample best_direction_pl(const BeamTable &table)
    {
        if (table.entries.empty() || !(table.entries.front().avg_magnitude > 0.0))
            throw Error(ErrorCode::ZeroSignal, "no direction received any signal");
        return make_sample(table, -20.0 * std::log10(table.entries.front().avg_magnitude), PlKind::best());
    }

    PathLossSample omni_pl(const BeamTable &table)
    {
        const double power = power_sum(table, table.entries.size());
        if (!(power > 0.0))
            throw Error(ErrorCode::ZeroSignal, "no direction received any signal");
        return make_sample(table, power_to_db_loss(power), PlKind::omni());
    }

    PathLossSample combine_coherent(const BeamTable &table, int n)
    {
        check_beam_count(table, n);
        double amplitude = 0.0;
        for (int k = 0; k < n; ++k)
            amplitude += table.entries[static_cast<std::size_t>(k)].avg_magnitude;
        if (!(amplitude > 0.0))
            throw Error(ErrorCode::ZeroSignal, "combined beams carry no signal");
        return make_sample(table, -20.0 * std::log10(amplitude), PlKind::coherent(n));
    }

    PathLossSample combine_noncoherent(const BeamTable &table, int n)
    {
        check_beam_count(table, n);
        const double power = power_sum(table, static_cast<std::size_t>(n));
        if (!(power > 0.0))
            throw Error(ErrorCode::ZeroSignal, "combined beams carry no signal");
        return make_sample(table, power_to_db_loss(power), PlKind::noncoherent(n));
    }

    std::vector<PathLossSample> extract_all(const BeamTable &table, int max_beams)
    {
        std::vector<PathLossSample> out;
        out.push_back(best_direction_pl(table));
        out.push_back(omni_pl(table));
        const int n_max = std::min<int>(max_beams, static_cast<int>(table.entries.size()));
        for (int n = 1; n <= n_max; ++n)
            out.push_back(combine_coherent(table, n));
        for (int n = 1; n <= n_max; ++n)
            out.push_back(combine_noncoherent(table, n));
        return out;
    }
}
