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

#ifndef THZPL_IO_HPP
#define THZPL_IO_HPP

#include "thzpl/calibration.hpp"
#include "thzpl/core_types.hpp"
#include "thzpl/fitting.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thzpl
{
    // Sweep CSV: one row per (direction, frequency) sample, LF line endings, mandatory header.
    // An optional first line "# thzpl-sweep v<N>" pins the schema version.
    // Calibration rows use scan_id "CAL:<name>" and put the record type
    // ("s_calibration" or "h_attenuator") in the tx_id column.
    inline constexpr int kSweepSchemaVersion = 1;
    inline constexpr std::string_view kSweepHeader =
        "scan_id,scenario,tx_id,rx_id,distance_m,azimuth_deg,elevation_deg,freq_hz,s21_re,s21_im";
    inline constexpr std::string_view kCalibrationPrefix = "CAL:";

    struct NamedCalibration
    {
        std::string name;
        CalibrationRecord record;
    };

    struct SweepFile
    {
        std::vector<DirectionalScan> scans;
        std::vector<NamedCalibration> calibrations;
    };

    struct SweepReadOptions
    {
        double grid_step_deg = 10.0; // angles must be integer multiples of this step
        std::string source = "<input>";
    };

    // Throws ParseError naming source and line, or SchemaVersion
    SweepFile read_sweep_csv(std::istream &in, const SweepReadOptions &options = {});
    SweepFile read_sweep_file(const std::filesystem::path &path, SweepReadOptions options = {});
    void write_sweep_csv(std::ostream &out, const SweepFile &file);
    void write_sweep_file(const std::filesystem::path &path, const SweepFile &file);

    // Sounder metadata for a parsed band: the published sounder when the sweep matches one, else 140 GHz values
    SounderConfig default_sounder_for(const FrequencyBand &band, const AngularGrid &grid);

    // Shortest decimal that round-trips to the same double
    std::string format_shortest(double value);

    // Value of the %.6g rendering, so that JSON output shows at most six significant digits
    double round_significant(double value, int digits = 6);

    // Samples CSV: scan_id,scenario,distance_m,frequency_ghz,kind,pl_db
    inline constexpr std::string_view kSamplesHeader = "scan_id,scenario,distance_m,frequency_ghz,kind,pl_db";
    void write_samples_csv(std::ostream &out, std::span<const PathLossSample> samples);
    std::vector<PathLossSample> read_samples_csv(std::istream &in, const std::string &source = "<input>");

    // FNV-1a 64 over the sorted canonical sample rows; independent of sample order
    std::string dataset_hash(const Dataset &data);

    // Stable field order, six significant digits
    std::string fit_report_json(const FitReport &report, const Dataset &data);

    std::string read_text_file(const std::filesystem::path &path);
    void write_text_file(const std::filesystem::path &path, std::string_view text);
}

#endif
