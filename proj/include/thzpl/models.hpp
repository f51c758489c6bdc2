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

#ifndef THZPL_MODELS_HPP
#define THZPL_MODELS_HPP

#include "thzpl/core_types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace thzpl
{
    // Close-in reference-distance model anchored at FSPL(d0)
    struct CiModel
    {
        double ple = 2.0;
        std::optional<double> sigma_sf_db; // absent when a preset does not publish it
        double frequency_ghz = 0.0;        // frequency inserted into FSPL(d0)
        PlKind kind;
        Scenario scenario = Scenario::MeetingRoom;
    };

    // Floating-intercept model with an explicit frequency term (f in GHz, f0 = 1 GHz)
    struct AbgModel
    {
        double alpha = 0.0;
        double beta_db = 0.0;
        double gamma = 0.0;
        double sigma_sf_db = 0.0;
        std::optional<double> r_squared;
    };

    // Close-in model with a path loss exponent weighted about f_avg
    struct CifModel
    {
        double n = 0.0;
        double b = 0.0;
        double f_avg_ghz = 0.0;
        double sigma_sf_db = 0.0;
        std::optional<double> r_squared;
    };

    using PathLossModel = std::variant<CiModel, AbgModel, CifModel>;

    // 20 log10(4 pi f d / c); throws DomainError unless both inputs are positive and finite
    double fspl_db(double f_ghz, double d_m);

    // Mean predictions (shadow-fading term zero). Distances below d0 throw DomainError.
    double ci_predict(const CiModel &m, double d_m);
    double abg_predict(const AbgModel &m, double d_m, double f_ghz);
    double cif_predict(const CifModel &m, double d_m, double f_ghz);

    // Dispatches on the model; the CI model ignores f_ghz and uses its own frequency
    double predict(const PathLossModel &m, double d_m, double f_ghz);

    std::optional<double> sigma_sf_db(const PathLossModel &m);

    struct FrequencyCount
    {
        double frequency_ghz = 0.0;
        std::size_t count = 0;
    };

    // sum(f_k N_k) / sum(N_k); throws EmptyDataset when no samples are counted
    double weighted_avg_frequency(std::span<const FrequencyCount> counts);

    // Zero-mean Gaussian shadow-fading draws in dB, reproducible under the seed
    class ShadowFading
    {
    public:
        explicit ShadowFading(std::uint64_t seed) : engine_(seed) {}
        double draw(double sigma_db);

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    // ---- Published presets --------------------------------------------------

    struct BeamCombinationRow
    {
        int beams = 1;
        CiModel at_140ghz;
        CiModel at_220ghz;
    };

    struct ScenarioPreset
    {
        Scenario scenario = Scenario::MeetingRoom;
        CiModel ci_best_140;
        CiModel ci_best_220;
        CiModel ci_omni_140;
        CiModel ci_omni_220;
        AbgModel abg_best;
        AbgModel abg_omni;
        CifModel cif_best;
        CifModel cif_omni;
        std::vector<BeamCombinationRow> coherent;    // NLoS only, N = 1..5
        std::vector<BeamCombinationRow> noncoherent; // NLoS only, N = 1..5

        // CI model for a kind at band 140 or 220; nullptr when not published
        const CiModel *find_ci(PlKind kind, int band_ghz) const;
    };

    // Frequency that stands in for the nominal 140 / 220 GHz bands in FSPL(d0)
    double preset_band_frequency_ghz(int band_ghz, FrequencyMode mode);

    std::vector<ScenarioPreset> load_presets(FrequencyMode mode = FrequencyMode::Nominal);
    const ScenarioPreset &find_preset(const std::vector<ScenarioPreset> &presets, Scenario scenario);

    // JSON document with one object per scenario; every model carries its table of origin
    std::string presets_to_json(const std::vector<ScenarioPreset> &presets);
    std::vector<ScenarioPreset> presets_from_json(const std::string &text);
}

#endif
