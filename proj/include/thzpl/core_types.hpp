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

#ifndef THZPL_CORE_TYPES_HPP
#define THZPL_CORE_TYPES_HPP

#include "thzpl/errors.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thzpl
{
    inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]
    inline constexpr double kReferenceDistanceM = 1.0;   // d0 of every close-in model
    inline constexpr double kReferenceFrequencyGhz = 1.0; // f0 of the ABG model

    enum class Scenario
    {
        MeetingRoom,
        OfficeArea,
        Hallway,
        NLoS
    };

    inline constexpr std::array<Scenario, 4> kAllScenarios = {
        Scenario::MeetingRoom, Scenario::OfficeArea, Scenario::Hallway, Scenario::NLoS};

    std::string_view scenario_name(Scenario s);  // Identifier form, e.g. "MeetingRoom"
    std::string_view scenario_title(Scenario s); // Table form, e.g. "Meeting room"

    // Accepts either form, case-insensitive, ignoring blanks, '-' and '_'
    Scenario parse_scenario(std::string_view text);

    // Which single frequency stands in for a whole sweep band
    enum class FrequencyMode
    {
        Nominal, // the label frequency, e.g. 140 GHz for the 130-143 GHz sweep
        Center   // the arithmetic sweep center, e.g. 136.5 GHz
    };

    FrequencyMode parse_frequency_mode(std::string_view text);

    struct FrequencyBand
    {
        double start_hz = 0.0;
        double end_hz = 0.0;
        std::size_t n_points = 0;
        std::string label;

        // Validating constructor, throws Error(InvalidBand)
        static FrequencyBand make(double start_hz, double end_hz, std::size_t n_points, std::string label);

        double step_hz() const;                  // sweep interval
        double frequency_hz(std::size_t s) const; // frequency of sweep point s
        double center_hz() const;
        double bandwidth_hz() const { return end_hz - start_hz; }
        double max_delay_s() const;        // 1 / step
        double max_path_length_m() const;  // c * max_delay_s
        double delay_resolution_s() const; // 1 / bandwidth

        // Frequency parsed from a label such as "140GHz"; falls back to the center
        double nominal_ghz() const;
        double representative_ghz(FrequencyMode mode) const;

        // Same sweep points; the label is ignored
        bool same_sweep(const FrequencyBand &other) const;
    };

    void check_band(const FrequencyBand &band);

    FrequencyBand band_140ghz(); // 130-143 GHz, 1301 points
    FrequencyBand band_220ghz(); // 201-209 GHz, 801 points

    struct AngularGrid
    {
        std::vector<double> azimuth_deg;   // [0, 360), increasing, uniform
        std::vector<double> elevation_deg; // [-90, 90], increasing, uniform
        double step_deg = 0.0;

        static AngularGrid uniform(double az_first, double az_last, double el_first, double el_last, double step_deg);

        std::size_t n_azimuth() const { return azimuth_deg.size(); }
        std::size_t n_elevation() const { return elevation_deg.size(); }
        std::size_t size() const { return azimuth_deg.size() * elevation_deg.size(); }

        // Index of an on-grid angle (within 1e-6 deg), nullopt otherwise
        std::optional<std::size_t> azimuth_index(double az_deg) const;
        std::optional<std::size_t> elevation_index(double el_deg) const;
    };

    void check_grid(const AngularGrid &grid);

    // Azimuth 0:10:350, elevation -20:10:20
    AngularGrid default_scan_grid();

    struct SounderConfig
    {
        FrequencyBand band;
        AngularGrid grid;
        double tx_gain_dbi = 0.0;
        double rx_gain_dbi = 0.0;
        double tx_power_dbm = 0.0;
        double noise_floor_dbm = 0.0;
        double tx_hpbw_deg = 0.0;
        double rx_hpbw_deg = 0.0;

        // Linear channel amplitude whose received power equals the noise floor
        double noise_floor_amplitude() const;
    };

    void check_config(const SounderConfig &cfg);

    SounderConfig sounder_140ghz();
    SounderConfig sounder_220ghz();

    // Complex S21 / CTF samples indexed (azimuth i, elevation j, frequency s), linear scale
    class ChannelCube
    {
    public:
        ChannelCube() = default;
        ChannelCube(std::size_t n_azimuth, std::size_t n_elevation, std::size_t n_frequency);

        std::size_t n_azimuth() const { return n_az_; }
        std::size_t n_elevation() const { return n_el_; }
        std::size_t n_frequency() const { return n_freq_; }
        std::size_t size() const { return values_.size(); }

        std::size_t offset(std::size_t i, std::size_t j, std::size_t s) const { return (i * n_el_ + j) * n_freq_ + s; }
        std::complex<double> &at(std::size_t i, std::size_t j, std::size_t s) { return values_[offset(i, j, s)]; }
        const std::complex<double> &at(std::size_t i, std::size_t j, std::size_t s) const { return values_[offset(i, j, s)]; }

        const std::vector<std::complex<double>> &values() const { return values_; }
        std::vector<std::complex<double>> &values() { return values_; }

        bool operator==(const ChannelCube &) const = default;

    private:
        std::size_t n_az_ = 0;
        std::size_t n_el_ = 0;
        std::size_t n_freq_ = 0;
        std::vector<std::complex<double>> values_;
    };

    struct DirectionalScan
    {
        std::string scan_id;
        std::string tx_id;
        std::string rx_id;
        Scenario scenario = Scenario::MeetingRoom;
        double distance_m = 0.0;
        SounderConfig config;
        ChannelCube s21;
    };

    struct PlKind
    {
        enum class Type
        {
            BestDirection,
            Omni,
            Coherent,
            NonCoherent
        };

        Type type = Type::BestDirection;
        int beams = 1; // meaningful for the combined kinds only

        static PlKind best() { return {Type::BestDirection, 1}; }
        static PlKind omni() { return {Type::Omni, 0}; }
        static PlKind coherent(int n) { return {Type::Coherent, n}; }
        static PlKind noncoherent(int n) { return {Type::NonCoherent, n}; }

        bool operator==(const PlKind &) const = default;
    };

    // "best", "omni", "coherent-3", "noncoherent-3"
    std::string to_string(PlKind kind);
    PlKind parse_pl_kind(std::string_view text);

    struct PathLossSample
    {
        double distance_m = 0.0;
        double frequency_ghz = 0.0;
        double pl_db = 0.0;
        PlKind kind;
        Scenario scenario = Scenario::MeetingRoom;
        std::string scan_id;
    };

    struct ScanViolation
    {
        ErrorCode code;
        std::string detail;
        std::optional<std::array<std::size_t, 3>> index; // (i, j, s) for sample-level defects
    };

    class ValidationError : public Error
    {
    public:
        explicit ValidationError(std::vector<ScanViolation> violations);
        const std::vector<ScanViolation> &violations() const { return violations_; }

    private:
        std::vector<ScanViolation> violations_;
    };

    // Every invariant violation of the scan, empty when it is well formed
    std::vector<ScanViolation> scan_violations(const DirectionalScan &scan);

    // Returns the scan itself when valid, throws ValidationError listing all violations otherwise
    const DirectionalScan &validate_scan(const DirectionalScan &scan);
}

#endif
