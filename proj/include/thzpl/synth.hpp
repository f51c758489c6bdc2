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

#ifndef THZPL_SYNTH_HPP
#define THZPL_SYNTH_HPP

#include "thzpl/calibration.hpp"
#include "thzpl/core_types.hpp"
#include "thzpl/fitting.hpp"
#include "thzpl/models.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace thzpl
{
    struct MultipathComponent
    {
        double gain = 0.0;    // linear amplitude, antenna gains included
        double delay_s = 0.0; // absolute propagation delay
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
    };

    struct VirtualEnvironment
    {
        std::vector<MultipathComponent> mpcs;
        Scenario scenario = Scenario::MeetingRoom;
        std::uint64_t rng_seed = 0;
    };

    // Gains must be non-negative and every delay detectable, i.e. within [0, 1/step] of the band
    void check_environment(const VirtualEnvironment &env, const FrequencyBand &band);

    struct Placement
    {
        std::string scan_id;
        std::string tx_id;
        std::string rx_id;
        double distance_m = 0.0;
    };

    // Idealised Gaussian main lobe, unit peak, half power at offset = hpbw / 2, no sidelobes
    double gaussian_beam_amplitude(double offset_deg, double hpbw_deg);

    // Great-circle angle between two (azimuth, elevation) directions
    double angular_separation_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg);

    // s21(i, j, s) = sum_paths gain * A_rx(offset to beam (i, j)) * exp(-j 2 pi f_s delay) + noise.
    // Noise is circularly-symmetric complex Gaussian with E|n|^2 = noise_floor_amplitude()^2,
    // drawn from env.rng_seed in (i, j, s) order; add_noise = false gives the noiseless channel.
    DirectionalScan synthesize_scan(const VirtualEnvironment &env, const SounderConfig &cfg, const Placement &placement,
                                    bool add_noise = true);

    // One line-of-sight path with free-space amplitude c / (4 pi f d) and delay d / c
    VirtualEnvironment free_space_environment(double distance_m, double f_ghz, double azimuth_deg, double elevation_deg,
                                              Scenario scenario, std::uint64_t seed);

    // splitmix64 finaliser over (base ^ golden * (index + 1)); per-placement seeds of a campaign
    std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

    // Smooth system response: gain_db plus a sinusoidal ripple of ripple_db peak across the band,
    // and a linear phase from group_delay_s
    std::vector<std::complex<double>> synthetic_system_response(const FrequencyBand &band, double gain_db,
                                                                double ripple_db, double ripple_cycles,
                                                                double group_delay_s);

    std::vector<std::complex<double>> flat_attenuator(const FrequencyBand &band, double loss_db);

    // Raw sounder output S_measured = H_system * H_channel
    DirectionalScan apply_system_response(const DirectionalScan &channel, const std::vector<std::complex<double>> &h_system);

    // Back-to-back record S_calibration = H_attenuator * H_system
    CalibrationRecord make_calibration_record(const FrequencyBand &band, const std::vector<std::complex<double>> &h_system,
                                              const std::vector<std::complex<double>> &h_attenuator);

    struct CampaignSpec
    {
        std::vector<double> distances_m;
        std::vector<double> frequencies_ghz; // ignored for CI models, which carry their own frequency
        Scenario scenario = Scenario::MeetingRoom;
        PlKind kind;
    };

    // PL_i = mean prediction + N(0, sigma^2) in (frequency, distance) order; sigma from the model (0 if absent)
    Dataset synthesize_campaign(const PathLossModel &model, const CampaignSpec &spec, std::uint64_t seed);

    // ---- Image method for a rectangular room ----------------------------------

    struct Point3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;
    };

    struct Room
    {
        double length_m = 0.0; // x extent
        double width_m = 0.0;  // y extent
    };

    Room meeting_room(); // 10.15 m x 7.9 m

    struct ImageMethodOptions
    {
        int max_order = 3;
        double reflection_loss_db = 10.0; // per wall bounce
        double frequency_ghz = 140.0;     // free-space amplitude evaluated here
    };

    // Wall reflections only (no floor or ceiling). The Tx boresight points at the Rx and the
    // Tx pattern uses cfg.tx_hpbw_deg. Paths longer than the band's maximum path length are dropped.
    VirtualEnvironment image_method_environment(const Room &room, const Point3 &tx, const Point3 &rx,
                                                const SounderConfig &cfg, const ImageMethodOptions &options,
                                                Scenario scenario, std::uint64_t seed);
}

#endif
