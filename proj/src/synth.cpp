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

#include "thzpl/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace thzpl
{
    namespace
    {
        constexpr double kDegToRad = std::numbers::pi / 180.0;
        constexpr double kRadToDeg = 180.0 / std::numbers::pi;

        using Vec3 = std::array<double, 3>;

        Vec3 unit_vector(double az_deg, double el_deg)
        {
            const double az = az_deg * kDegToRad;
            const double el = el_deg * kDegToRad;
            return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
        }

        double angle_between(const Vec3 &a, const Vec3 &b)
        {
            const Vec3 c = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
            const double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
            const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            return std::atan2(cross, dot);
        }

        double norm(const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

        // Image coordinate along one axis and the number of wall bounces it implies
        struct AxisImage
        {
            double coord;
            int bounces;
        };

        std::vector<AxisImage> axis_images(double source, double extent, int max_order)
        {
            std::vector<AxisImage> out;
            for (int m = -max_order; m <= max_order; ++m)
            {
                const double base = 2.0 * m * extent;
                out.push_back({base + source, std::abs(2 * m)});
                out.push_back({base - source, std::abs(2 * m - 1)});
            }
            return out;
        }
    }

    void check_environment(const VirtualEnvironment &env, const FrequencyBand &band)
    {
        const double tau_max = band.max_delay_s();
        for (std::size_t k = 0; k < env.mpcs.size(); ++k)
        {
            const auto &p = env.mpcs[k];
            std::ostringstream msg;
            if (!(p.gain >= 0.0) || !std::isfinite(p.gain))
                msg << "path " << k << " has gain " << p.gain;
            else if (!(p.delay_s >= 0.0) || !(p.delay_s <= tau_max))
                msg << "path " << k << " delay " << p.delay_s << " s is outside the detectable range [0, " << tau_max << "]";
            else if (!std::isfinite(p.azimuth_deg) || !std::isfinite(p.elevation_deg))
                msg << "path " << k << " has a non-finite direction";
            if (!msg.str().empty())
                throw Error(ErrorCode::DomainError, msg.str());
        }
    }

    double gaussian_beam_amplitude(double offset_deg, double hpbw_deg)
    {
        const double x = offset_deg / hpbw_deg;
        return std::exp(-2.0 * std::numbers::ln2 * x * x);
    }

    double angular_separation_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg)
    {
        return angle_between(unit_vector(az1_deg, el1_deg), unit_vector(az2_deg, el2_deg)) * kRadToDeg;
    }

    DirectionalScan synthesize_scan(const VirtualEnvironment &env, const SounderConfig &cfg, const Placement &placement,
                                    bool add_noise)
    {
        check_config(cfg);
        check_environment(env, cfg.band);

        const auto &grid = cfg.grid;
        const std::size_t n_freq = cfg.band.n_points;

        DirectionalScan scan;
        scan.scan_id = placement.scan_id;
        scan.tx_id = placement.tx_id;
        scan.rx_id = placement.rx_id;
        scan.distance_m = placement.distance_m;
        scan.scenario = env.scenario;
        scan.config = cfg;
        scan.s21 = ChannelCube(grid.n_azimuth(), grid.n_elevation(), n_freq);

        // per-path frequency responses, shared by every beam
        std::vector<std::vector<std::complex<double>>> phasors;
        std::vector<Vec3> directions;
        for (const auto &p : env.mpcs)
        {
            std::vector<std::complex<double>> ph(n_freq);
            for (std::size_t s = 0; s < n_freq; ++s)
                ph[s] = p.gain * std::polar(1.0, -2.0 * std::numbers::pi * cfg.band.frequency_hz(s) * p.delay_s);
            phasors.push_back(std::move(ph));
            directions.push_back(unit_vector(p.azimuth_deg, p.elevation_deg));
        }

        for (std::size_t i = 0; i < grid.n_azimuth(); ++i)
            for (std::size_t j = 0; j < grid.n_elevation(); ++j)
            {
                const Vec3 beam = unit_vector(grid.azimuth_deg[i], grid.elevation_deg[j]);
                for (std::size_t p = 0; p < env.mpcs.size(); ++p)
                {
                    const double a = gaussian_beam_amplitude(angle_between(beam, directions[p]) * kRadToDeg, cfg.rx_hpbw_deg);
                    if (a == 0.0)
                        continue;
                    for (std::size_t s = 0; s < n_freq; ++s)
                        scan.s21.at(i, j, s) += a * phasors[p][s];
                }
            }

        if (add_noise)
        {
            std::mt19937_64 engine(env.rng_seed);
            std::normal_distribution<double> normal(0.0, cfg.noise_floor_amplitude() / std::numbers::sqrt2);
            for (auto &h : scan.s21.values())
            {
                const double re = normal(engine);
                const double im = normal(engine);
                h += std::complex<double>(re, im);
            }
        }
        return scan;
    }

    VirtualEnvironment free_space_environment(double distance_m, double f_ghz, double azimuth_deg, double elevation_deg,
                                              Scenario scenario, std::uint64_t seed)
    {
        if (!(distance_m > 0.0) || !(f_ghz > 0.0))
            throw Error(ErrorCode::DomainError, "free-space path needs positive distance and frequency");
        const double gain = kSpeedOfLight / (4.0 * std::numbers::pi * f_ghz * 1e9 * distance_m);
        return VirtualEnvironment{{{gain, distance_m / kSpeedOfLight, azimuth_deg, elevation_deg}}, scenario, seed};
    }

    std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
    {
        std::uint64_t z = base ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::vector<std::complex<double>> synthetic_system_response(const FrequencyBand &band, double gain_db,
                                                                double ripple_db, double ripple_cycles,
                                                                double group_delay_s)
    {
        check_band(band);
        std::vector<std::complex<double>> h(band.n_points);
        for (std::size_t s = 0; s < band.n_points; ++s)
        {
            const double x = static_cast<double>(s) / static_cast<double>(band.n_points - 1);
            const double mag_db = gain_db + ripple_db * std::sin(2.0 * std::numbers::pi * ripple_cycles * x);
            const double phase = -2.0 * std::numbers::pi * (band.frequency_hz(s) - band.start_hz) * group_delay_s;
            h[s] = std::polar(std::pow(10.0, mag_db / 20.0), phase);
        }
        return h;
    }

    std::vector<std::complex<double>> flat_attenuator(const FrequencyBand &band, double loss_db)
    {
        return std::vector<std::complex<double>>(band.n_points, std::complex<double>(std::pow(10.0, -loss_db / 20.0), 0.0));
    }

    DirectionalScan apply_system_response(const DirectionalScan &channel, const std::vector<std::complex<double>> &h_system)
    {
        if (h_system.size() != channel.s21.n_frequency())
            throw Error(ErrorCode::DimensionMismatch, "system response length does not match the scan");
        DirectionalScan out = channel;
        auto &values = out.s21.values();
        const std::size_t n_freq = out.s21.n_frequency();
        for (std::size_t k = 0; k < values.size(); ++k)
            values[k] *= h_system[k % n_freq];
        return out;
    }

    CalibrationRecord make_calibration_record(const FrequencyBand &band, const std::vector<std::complex<double>> &h_system,
                                              const std::vector<std::complex<double>> &h_attenuator)
    {
        if (h_system.size() != band.n_points || h_attenuator.size() != band.n_points)
            throw Error(ErrorCode::DimensionMismatch, "response vectors do not match the band");
        CalibrationRecord cal{band, std::vector<std::complex<double>>(band.n_points), h_attenuator};
        for (std::size_t s = 0; s < band.n_points; ++s)
            cal.s_calibration[s] = h_attenuator[s] * h_system[s];
        return cal;
    }

    Dataset synthesize_campaign(const PathLossModel &model, const CampaignSpec &spec, std::uint64_t seed)
    {
        for (double d : spec.distances_m)
            if (!(d >= kReferenceDistanceM) || !std::isfinite(d))
                throw Error(ErrorCode::DomainError, "campaign distances must be at least the 1 m reference distance");

        std::vector<double> freqs = spec.frequencies_ghz;
        if (const auto *ci = std::get_if<CiModel>(&model))
            freqs = {ci->frequency_ghz};
        if (freqs.empty())
            throw Error(ErrorCode::DomainError, "multi-band campaign needs at least one frequency");

        const double sigma = sigma_sf_db(model).value_or(0.0);
        ShadowFading fading(seed);
        Dataset data;
        for (double f : freqs)
            for (double d : spec.distances_m)
            {
                PathLossSample s;
                s.distance_m = d;
                s.frequency_ghz = f;
                s.pl_db = predict(model, d, f) + fading.draw(sigma);
                s.kind = spec.kind;
                s.scenario = spec.scenario;
                data.samples.push_back(std::move(s));
            }
        return data;
    }

    Room meeting_room() { return Room{10.15, 7.9}; }

    VirtualEnvironment image_method_environment(const Room &room, const Point3 &tx, const Point3 &rx,
                                                const SounderConfig &cfg, const ImageMethodOptions &options,
                                                Scenario scenario, std::uint64_t seed)
    {
        check_config(cfg);
        if (!(room.length_m > 0.0) || !(room.width_m > 0.0))
            throw Error(ErrorCode::DomainError, "room dimensions must be positive");
        auto inside = [&](const Point3 &p)
        { return p.x > 0.0 && p.x < room.length_m && p.y > 0.0 && p.y < room.width_m; };
        if (!inside(tx) || !inside(rx))
            throw Error(ErrorCode::DomainError, "Tx and Rx must lie inside the room");
        if (tx.x == rx.x && tx.y == rx.y && tx.z == rx.z)
            throw Error(ErrorCode::DegenerateGeometry, "Tx and Rx coincide");
        if (options.max_order < 0)
            throw Error(ErrorCode::DomainError, "reflection order must be non-negative");

        const double max_length = cfg.band.max_path_length_m();
        const double gamma = std::pow(10.0, -options.reflection_loss_db / 20.0);
        const Vec3 boresight = {rx.x - tx.x, rx.y - tx.y, rx.z - tx.z};

        VirtualEnvironment env;
        env.scenario = scenario;
        env.rng_seed = seed;
        for (const auto &ix : axis_images(tx.x, room.length_m, options.max_order))
            for (const auto &iy : axis_images(tx.y, room.width_m, options.max_order))
            {
                const int order = ix.bounces + iy.bounces;
                if (order > options.max_order)
                    continue;
                // propagation direction on arrival, from image towards Rx
                const Vec3 arrival = {rx.x - ix.coord, rx.y - iy.coord, rx.z - tx.z};
                const double length = norm(arrival);
                if (!(length > 0.0) || length > max_length)
                    continue;
                const Vec3 departure = {(ix.bounces % 2 ? -1.0 : 1.0) * arrival[0],
                                        (iy.bounces % 2 ? -1.0 : 1.0) * arrival[1], arrival[2]};
                const double tx_amp =
                    gaussian_beam_amplitude(angle_between(departure, boresight) * kRadToDeg, cfg.tx_hpbw_deg);
                const double gain = std::pow(gamma, order) * tx_amp * kSpeedOfLight /
                                    (4.0 * std::numbers::pi * options.frequency_ghz * 1e9 * length);

                // Rx looks back along the arrival direction
                double az = std::atan2(-arrival[1], -arrival[0]) * kRadToDeg;
                if (az < 0.0)
                    az += 360.0;
                const double el = std::atan2(-arrival[2], std::hypot(arrival[0], arrival[1])) * kRadToDeg;
                env.mpcs.push_back({gain, length / kSpeedOfLight, az, el});
            }
        return env;
    }
}
