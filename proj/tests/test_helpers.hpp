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

#ifndef THZPL_TEST_HELPERS_HPP
#define THZPL_TEST_HELPERS_HPP

#include "thzpl/core_types.hpp"
#include "thzpl/extraction.hpp"

#include <complex>
#include <filesystem>
#include <random>
#include <string>

namespace thzpl::test
{
    // Scan with every sample set to `value`
    inline DirectionalScan flat_scan(const SounderConfig &cfg, double distance_m, std::complex<double> value = {0.0, 0.0})
    {
        DirectionalScan scan;
        scan.scan_id = "S1";
        scan.tx_id = "TX1";
        scan.rx_id = "RX1";
        scan.scenario = Scenario::MeetingRoom;
        scan.distance_m = distance_m;
        scan.config = cfg;
        scan.s21 = ChannelCube(cfg.grid.n_azimuth(), cfg.grid.n_elevation(), cfg.band.n_points);
        for (auto &h : scan.s21.values())
            h = value;
        return scan;
    }

    // Small sounder for fast tests: 4 x 3 directions, 8 sweep points
    inline SounderConfig small_config()
    {
        SounderConfig cfg = sounder_140ghz();
        cfg.band = FrequencyBand::make(130e9, 130.07e9, 8, "140GHz-test");
        cfg.grid = AngularGrid::uniform(0.0, 30.0, -10.0, 10.0, 10.0);
        return cfg;
    }

    inline BeamTable random_table(std::mt19937_64 &rng, std::size_t n, double zero_fraction = 0.2)
    {
        std::uniform_real_distribution<double> mag(1e-6, 1e-2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        BeamTable t;
        for (std::size_t k = 0; k < n; ++k)
            t.entries.push_back({static_cast<double>(k % 36) * 10.0, static_cast<double>(k / 36) * 10.0 - 20.0,
                                 u(rng) < zero_fraction ? 0.0 : mag(rng)});
        t.entries[0].avg_magnitude = mag(rng); // at least one positive magnitude
        sort_beams(t.entries);
        t.distance_m = 5.0;
        t.frequency_ghz = 140.0;
        return t;
    }

    // Unique scratch directory under the system temp dir, removed on destruction
    class TempDir
    {
    public:
        explicit TempDir(const std::string &tag)
        {
            std::random_device rd;
            path_ = std::filesystem::temp_directory_path() / ("thzpl_" + tag + "_" + std::to_string(rd()));
            std::filesystem::create_directories(path_);
        }
        ~TempDir()
        {
            std::error_code ec;
            std::filesystem::remove_all(path_, ec);
        }
        const std::filesystem::path &path() const { return path_; }

    private:
        std::filesystem::path path_;
    };
}

#endif
