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

#include "thzpl/core_types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace thzpl
{
    namespace
    {
        constexpr double kAngleTolDeg = 1e-6;

        std::string fold(std::string_view text)
        {
            std::string out;
            for (char c : text)
            {
                if (c == ' ' || c == '-' || c == '_' || c == '\t')
                    continue;
                out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            }
            return out;
        }

        std::optional<std::size_t> find_angle(const std::vector<double> &axis, double value)
        {
            auto it = std::lower_bound(axis.begin(), axis.end(), value - kAngleTolDeg);
            if (it != axis.end() && std::abs(*it - value) <= kAngleTolDeg)
                return static_cast<std::size_t>(it - axis.begin());
            return std::nullopt;
        }

        std::string check_axis(const std::vector<double> &axis, double lo, double hi, bool hi_inclusive, double step, const char *name)
        {
            std::ostringstream msg;
            for (std::size_t k = 0; k < axis.size(); ++k)
            {
                double v = axis[k];
                bool below = !(v >= lo - kAngleTolDeg);
                bool above = hi_inclusive ? !(v <= hi + kAngleTolDeg) : !(v < hi - kAngleTolDeg);
                if (below || above)
                {
                    msg << name << "[" << k << "] = " << v << " out of range";
                    return msg.str();
                }
                if (k > 0)
                {
                    double d = v - axis[k - 1];
                    if (!(d > 0.0))
                    {
                        msg << name << " not strictly increasing at " << k;
                        return msg.str();
                    }
                    if (std::abs(d - step) > kAngleTolDeg)
                    {
                        msg << name << " spacing " << d << " differs from step " << step << " at " << k;
                        return msg.str();
                    }
                }
            }
            return {};
        }
    }

    std::string_view scenario_name(Scenario s)
    {
        switch (s)
        {
        case Scenario::MeetingRoom: return "MeetingRoom";
        case Scenario::OfficeArea: return "OfficeArea";
        case Scenario::Hallway: return "Hallway";
        case Scenario::NLoS: return "NLoS";
        }
        return "";
    }

    std::string_view scenario_title(Scenario s)
    {
        switch (s)
        {
        case Scenario::MeetingRoom: return "Meeting room";
        case Scenario::OfficeArea: return "Office area";
        case Scenario::Hallway: return "Hallway";
        case Scenario::NLoS: return "NLoS";
        }
        return "";
    }

    Scenario parse_scenario(std::string_view text)
    {
        const std::string key = fold(text);
        if (key == "meetingroom" || key == "meeting")
            return Scenario::MeetingRoom;
        if (key == "officearea" || key == "office")
            return Scenario::OfficeArea;
        if (key == "hallway")
            return Scenario::Hallway;
        if (key == "nlos")
            return Scenario::NLoS;
        throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(text) + "'");
    }

    FrequencyMode parse_frequency_mode(std::string_view text)
    {
        const std::string key = fold(text);
        if (key == "nominal")
            return FrequencyMode::Nominal;
        if (key == "center" || key == "centre")
            return FrequencyMode::Center;
        throw Error(ErrorCode::ParseError, "unknown frequency mode '" + std::string(text) + "'");
    }

    // ---- FrequencyBand ------------------------------------------------------

    FrequencyBand FrequencyBand::make(double start_hz, double end_hz, std::size_t n_points, std::string label)
    {
        FrequencyBand band{start_hz, end_hz, n_points, std::move(label)};
        check_band(band);
        return band;
    }

    double FrequencyBand::step_hz() const
    {
        return (end_hz - start_hz) / static_cast<double>(n_points - 1);
    }

    double FrequencyBand::frequency_hz(std::size_t s) const
    {
        if (s + 1 == n_points)
            return end_hz;
        return start_hz + static_cast<double>(s) * step_hz();
    }

    double FrequencyBand::center_hz() const { return 0.5 * (start_hz + end_hz); }
    double FrequencyBand::max_delay_s() const { return 1.0 / step_hz(); }
    double FrequencyBand::max_path_length_m() const { return kSpeedOfLight * max_delay_s(); }
    double FrequencyBand::delay_resolution_s() const { return 1.0 / bandwidth_hz(); }

    double FrequencyBand::nominal_ghz() const
    {
        const char *first = label.data();
        const char *last = label.data() + label.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc() && value > 0.0 && std::isfinite(value))
        {
            const std::string unit = fold(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
            if (unit == "ghz")
                return value;
            if (unit == "thz")
                return value * 1e3;
            if (unit == "mhz")
                return value * 1e-3;
        }
        return center_hz() * 1e-9;
    }

    double FrequencyBand::representative_ghz(FrequencyMode mode) const
    {
        return mode == FrequencyMode::Nominal ? nominal_ghz() : center_hz() * 1e-9;
    }

    bool FrequencyBand::same_sweep(const FrequencyBand &other) const
    {
        return start_hz == other.start_hz && end_hz == other.end_hz && n_points == other.n_points;
    }

    void check_band(const FrequencyBand &band)
    {
        if (!std::isfinite(band.start_hz) || !std::isfinite(band.end_hz) || band.start_hz <= 0.0)
            throw Error(ErrorCode::InvalidBand, "band edges must be finite and positive");
        if (!(band.end_hz > band.start_hz))
            throw Error(ErrorCode::InvalidBand, "band end must exceed band start");
        if (band.n_points < 2)
            throw Error(ErrorCode::InvalidBand, "band needs at least 2 sweep points");
        if (!(band.step_hz() > 0.0) || !std::isfinite(band.max_path_length_m()))
            throw Error(ErrorCode::InvalidBand, "band sweep interval is degenerate");
    }

    FrequencyBand band_140ghz() { return FrequencyBand::make(130e9, 143e9, 1301, "140GHz"); }
    FrequencyBand band_220ghz() { return FrequencyBand::make(201e9, 209e9, 801, "220GHz"); }

    // ---- AngularGrid --------------------------------------------------------

    AngularGrid AngularGrid::uniform(double az_first, double az_last, double el_first, double el_last, double step_deg)
    {
        if (!(step_deg > 0.0) || !std::isfinite(step_deg))
            throw Error(ErrorCode::InvalidGrid, "grid step must be positive");
        AngularGrid grid;
        grid.step_deg = step_deg;
        auto fill = [step_deg](double first, double last, std::vector<double> &axis)
        {
            const auto n = static_cast<long>(std::floor((last - first) / step_deg + 1e-9)) + 1;
            for (long k = 0; k < n; ++k)
                axis.push_back(first + static_cast<double>(k) * step_deg);
        };
        fill(az_first, az_last, grid.azimuth_deg);
        fill(el_first, el_last, grid.elevation_deg);
        check_grid(grid);
        return grid;
    }

    std::optional<std::size_t> AngularGrid::azimuth_index(double az_deg) const { return find_angle(azimuth_deg, az_deg); }
    std::optional<std::size_t> AngularGrid::elevation_index(double el_deg) const { return find_angle(elevation_deg, el_deg); }

    void check_grid(const AngularGrid &grid)
    {
        if (grid.azimuth_deg.empty() || grid.elevation_deg.empty())
            throw Error(ErrorCode::InvalidGrid, "angular grid is empty");
        if (!(grid.step_deg > 0.0))
            throw Error(ErrorCode::InvalidGrid, "grid step must be positive");
        if (auto m = check_axis(grid.azimuth_deg, 0.0, 360.0, false, grid.step_deg, "azimuth"); !m.empty())
            throw Error(ErrorCode::InvalidGrid, m);
        if (auto m = check_axis(grid.elevation_deg, -90.0, 90.0, true, grid.step_deg, "elevation"); !m.empty())
            throw Error(ErrorCode::InvalidGrid, m);
    }

    AngularGrid default_scan_grid() { return AngularGrid::uniform(0.0, 350.0, -20.0, 20.0, 10.0); }

    // ---- SounderConfig ------------------------------------------------------

    double SounderConfig::noise_floor_amplitude() const
    {
        return std::pow(10.0, (noise_floor_dbm - tx_power_dbm) / 20.0);
    }

    void check_config(const SounderConfig &cfg)
    {
        check_band(cfg.band);
        check_grid(cfg.grid);
        if (!(cfg.tx_hpbw_deg > 0.0) || !(cfg.rx_hpbw_deg > 0.0))
            throw Error(ErrorCode::InvalidConfig, "beamwidths must be positive");
        if (!(cfg.noise_floor_dbm < cfg.tx_power_dbm + cfg.tx_gain_dbi + cfg.rx_gain_dbi))
            throw Error(ErrorCode::InvalidConfig, "noise floor leaves no link budget at the reference distance");
    }

    SounderConfig sounder_140ghz()
    {
        return SounderConfig{band_140ghz(), default_scan_grid(), 15.0, 25.0, 0.0, -120.0, 30.0, 10.0};
    }

    SounderConfig sounder_220ghz()
    {
        return SounderConfig{band_220ghz(), default_scan_grid(), 15.0, 25.0, 0.0, -120.0, 60.0, 10.0};
    }

    // ---- ChannelCube --------------------------------------------------------

    ChannelCube::ChannelCube(std::size_t n_azimuth, std::size_t n_elevation, std::size_t n_frequency)
        : n_az_(n_azimuth), n_el_(n_elevation), n_freq_(n_frequency),
          values_(n_azimuth * n_elevation * n_frequency)
    {
    }

    // ---- PlKind -------------------------------------------------------------

    std::string to_string(PlKind kind)
    {
        switch (kind.type)
        {
        case PlKind::Type::BestDirection: return "best";
        case PlKind::Type::Omni: return "omni";
        case PlKind::Type::Coherent: return "coherent-" + std::to_string(kind.beams);
        case PlKind::Type::NonCoherent: return "noncoherent-" + std::to_string(kind.beams);
        }
        return "";
    }

    PlKind parse_pl_kind(std::string_view text)
    {
        if (text == "best")
            return PlKind::best();
        if (text == "omni")
            return PlKind::omni();
        auto combined = [&](std::string_view prefix, PlKind::Type type) -> std::optional<PlKind>
        {
            if (text.substr(0, prefix.size()) != prefix)
                return std::nullopt;
            int n = 0;
            auto rest = text.substr(prefix.size());
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
            if (ec != std::errc() || ptr != rest.data() + rest.size() || n < 1)
                throw Error(ErrorCode::ParseError, "bad beam count in kind '" + std::string(text) + "'");
            return PlKind{type, n};
        };
        if (auto k = combined("coherent-", PlKind::Type::Coherent))
            return *k;
        if (auto k = combined("noncoherent-", PlKind::Type::NonCoherent))
            return *k;
        throw Error(ErrorCode::ParseError, "unknown path-loss kind '" + std::string(text) + "'");
    }

    // ---- Validation ---------------------------------------------------------

    ValidationError::ValidationError(std::vector<ScanViolation> violations)
        : Error(violations.empty() ? ErrorCode::DimensionMismatch : violations.front().code,
                [&]
                {
                    std::string msg = "scan failed validation:";
                    for (const auto &v : violations)
                        msg += " [" + std::string(error_code_name(v.code)) + "] " + v.detail + ";";
                    return msg;
                }()),
          violations_(std::move(violations))
    {
    }

    std::vector<ScanViolation> scan_violations(const DirectionalScan &scan)
    {
        std::vector<ScanViolation> out;
        auto record = [&](ErrorCode code, std::string detail)
        { out.push_back({code, std::move(detail), std::nullopt}); };

        try
        {
            check_config(scan.config);
        }
        catch (const Error &e)
        {
            record(e.code(), e.what());
        }

        if (!(scan.distance_m > 0.0) || !std::isfinite(scan.distance_m))
        {
            std::ostringstream msg;
            msg << "distance " << scan.distance_m << " m is not positive";
            record(ErrorCode::NonPositiveDistance, msg.str());
        }

        const auto &cube = scan.s21;
        const auto &cfg = scan.config;
        if (cube.n_azimuth() != cfg.grid.n_azimuth() || cube.n_elevation() != cfg.grid.n_elevation() ||
            cube.n_frequency() != cfg.band.n_points)
        {
            std::ostringstream msg;
            msg << "s21 is " << cube.n_azimuth() << "x" << cube.n_elevation() << "x" << cube.n_frequency()
                << " but grid and band require " << cfg.grid.n_azimuth() << "x" << cfg.grid.n_elevation() << "x"
                << cfg.band.n_points;
            record(ErrorCode::DimensionMismatch, msg.str());
        }

        for (std::size_t i = 0; i < cube.n_azimuth(); ++i)
            for (std::size_t j = 0; j < cube.n_elevation(); ++j)
                for (std::size_t s = 0; s < cube.n_frequency(); ++s)
                {
                    const auto &h = cube.at(i, j, s);
                    if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
                    {
                        std::ostringstream msg;
                        msg << "non-finite s21 at (" << i << ", " << j << ", " << s << ")";
                        out.push_back({ErrorCode::NonFiniteSample, msg.str(), std::array<std::size_t, 3>{i, j, s}});
                    }
                }
        return out;
    }

    const DirectionalScan &validate_scan(const DirectionalScan &scan)
    {
        auto violations = scan_violations(scan);
        if (!violations.empty())
            throw ValidationError(std::move(violations));
        return scan;
    }
}
