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

#include "thzpl/models.hpp"

#include <json.hpp>

#include <array>

namespace thzpl
{
    namespace
    {
        using json = nlohmann::ordered_json;

        constexpr int kPresetSchema = 1;

        struct CiRow
        {
            double best_140, omni_140, best_220, omni_220;
        };

        struct MultiBandRow
        {
            double p1, p2, p3, sigma, r2; // (alpha, beta, gamma) or (n, b, f0)
        };

        struct CombinationRow
        {
            double ple_140, sigma_140, ple_220, sigma_220;
        };

        // Indexed by kAllScenarios order: meeting room, office area, hallway, NLoS
        constexpr std::array<CiRow, 4> kCiTable = {{
            {1.94, 1.44, 2.05, 1.61},
            {2.11, 1.67, 2.15, 1.72},
            {1.79, 1.25, 1.93, 1.36},
            {2.59, 1.78, 2.78, 1.99},
        }};

        constexpr std::array<MultiBandRow, 4> kAbgBest = {{
            {2.21, 21.65, 2.41, 2.80, 0.82},
            {2.17, 28.31, 2.17, 1.74, 0.91},
            {1.74, 13.90, 2.89, 1.51, 0.94},
            {0.29, 38.05, 2.88, 2.78, 0.54},
        }};

        constexpr std::array<MultiBandRow, 4> kCifBest = {{
            {2.00, 0.12, 184.14, 2.81, 0.69},
            {2.13, 0.044, 182.18, 1.72, 0.89},
            {1.86, 0.16, 178.00, 1.64, 0.93},
            {2.68, 0.16, 180.00, 5.71, 0.50},
        }};

        constexpr std::array<MultiBandRow, 4> kAbgOmni = {{
            {2.08, 16.73, 2.52, 2.91, 0.80},
            {1.70, 27.58, 2.22, 1.39, 0.91},
            {1.29, 11.54, 2.94, 1.67, 0.90},
            {0.067, 27.27, 3.09, 1.19, 0.88},
        }};

        constexpr std::array<MultiBandRow, 4> kCifOmni = {{
            {1.53, 0.25, 184.14, 3.13, 0.54},
            {1.70, 0.06, 182.18, 1.38, 0.89},
            {1.30, 0.19, 178.00, 1.80, 0.84},
            {1.88, 0.25, 180.00, 3.98, 0.52},
        }};

        // NLoS beam combination; the best-direction row carries the CI sigma of the best kind
        constexpr CombinationRow kNlosBest = {2.59, 5.72, 2.78, 5.52};

        constexpr std::array<CombinationRow, 5> kNlosCoherent = {{
            {2.59, 5.72, 2.78, 5.52},
            {2.05, 4.60, 2.53, 4.54},
            {1.75, 3.93, 1.95, 3.93},
            {1.53, 3.46, 1.74, 3.50},
            {1.36, 3.10, 1.57, 3.18},
        }};

        constexpr std::array<CombinationRow, 5> kNlosNonCoherent = {{
            {2.59, 5.72, 2.78, 5.21},
            {2.34, 5.16, 2.53, 5.03},
            {2.19, 4.83, 2.39, 4.74},
            {2.09, 4.60, 2.29, 4.54},
            {2.01, 4.43, 2.22, 4.40},
        }};

        CiModel ci(double ple, std::optional<double> sigma, int band, PlKind kind, Scenario s, FrequencyMode mode)
        {
            return CiModel{ple, sigma, preset_band_frequency_ghz(band, mode), kind, s};
        }

        AbgModel abg(const MultiBandRow &r) { return AbgModel{r.p1, r.p2, r.p3, r.sigma, r.r2}; }
        CifModel cif(const MultiBandRow &r) { return CifModel{r.p1, r.p2, r.p3, r.sigma, r.r2}; }

        // ---- JSON ---------------------------------------------------------------

        json optional_number(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

        std::optional<double> read_optional(const json &j, const char *key)
        {
            if (!j.contains(key) || j.at(key).is_null())
                return std::nullopt;
            return j.at(key).get<double>();
        }

        const char *ci_table(const CiModel &m)
        {
            if (m.kind.type == PlKind::Type::Coherent || m.kind.type == PlKind::Type::NonCoherent)
                return "V";
            return m.sigma_sf_db ? "I,V" : "I";
        }

        json to_json(const CiModel &m)
        {
            json j;
            j["table"] = ci_table(m);
            j["kind"] = to_string(m.kind);
            j["ple"] = m.ple;
            j["sigma_sf_db"] = optional_number(m.sigma_sf_db);
            j["frequency_ghz"] = m.frequency_ghz;
            return j;
        }

        json to_json(const AbgModel &m, const char *table)
        {
            json j;
            j["table"] = table;
            j["alpha"] = m.alpha;
            j["beta_db"] = m.beta_db;
            j["gamma"] = m.gamma;
            j["sigma_sf_db"] = m.sigma_sf_db;
            j["r_squared"] = optional_number(m.r_squared);
            return j;
        }

        json to_json(const CifModel &m, const char *table)
        {
            json j;
            j["table"] = table;
            j["n"] = m.n;
            j["b"] = m.b;
            j["f_avg_ghz"] = m.f_avg_ghz;
            j["sigma_sf_db"] = m.sigma_sf_db;
            j["r_squared"] = optional_number(m.r_squared);
            return j;
        }

        json to_json(const std::vector<BeamCombinationRow> &rows)
        {
            json arr = json::array();
            for (const auto &r : rows)
            {
                json j;
                j["beams"] = r.beams;
                j["140"] = to_json(r.at_140ghz);
                j["220"] = to_json(r.at_220ghz);
                arr.push_back(std::move(j));
            }
            return arr;
        }

        CiModel ci_from_json(const json &j, Scenario s)
        {
            CiModel m;
            m.kind = parse_pl_kind(j.at("kind").get<std::string>());
            m.ple = j.at("ple").get<double>();
            m.sigma_sf_db = read_optional(j, "sigma_sf_db");
            m.frequency_ghz = j.at("frequency_ghz").get<double>();
            m.scenario = s;
            return m;
        }

        AbgModel abg_from_json(const json &j)
        {
            return AbgModel{j.at("alpha").get<double>(), j.at("beta_db").get<double>(), j.at("gamma").get<double>(),
                            j.at("sigma_sf_db").get<double>(), read_optional(j, "r_squared")};
        }

        CifModel cif_from_json(const json &j)
        {
            return CifModel{j.at("n").get<double>(), j.at("b").get<double>(), j.at("f_avg_ghz").get<double>(),
                            j.at("sigma_sf_db").get<double>(), read_optional(j, "r_squared")};
        }

        std::vector<BeamCombinationRow> rows_from_json(const json &arr, Scenario s)
        {
            std::vector<BeamCombinationRow> rows;
            for (const auto &j : arr)
                rows.push_back({j.at("beams").get<int>(), ci_from_json(j.at("140"), s), ci_from_json(j.at("220"), s)});
            return rows;
        }
    }

    double preset_band_frequency_ghz(int band_ghz, FrequencyMode mode)
    {
        switch (band_ghz)
        {
        case 140: return mode == FrequencyMode::Nominal ? 140.0 : band_140ghz().center_hz() * 1e-9;
        case 220: return mode == FrequencyMode::Nominal ? 220.0 : band_220ghz().center_hz() * 1e-9;
        default: throw Error(ErrorCode::DomainError, "presets exist for the 140 and 220 GHz bands only");
        }
    }

    const CiModel *ScenarioPreset::find_ci(PlKind kind, int band_ghz) const
    {
        if (band_ghz != 140 && band_ghz != 220)
            return nullptr;
        const bool low = band_ghz == 140;
        switch (kind.type)
        {
        case PlKind::Type::BestDirection: return low ? &ci_best_140 : &ci_best_220;
        case PlKind::Type::Omni: return low ? &ci_omni_140 : &ci_omni_220;
        case PlKind::Type::Coherent:
        case PlKind::Type::NonCoherent:
        {
            const auto &rows = kind.type == PlKind::Type::Coherent ? coherent : noncoherent;
            for (const auto &r : rows)
                if (r.beams == kind.beams)
                    return low ? &r.at_140ghz : &r.at_220ghz;
            return nullptr;
        }
        }
        return nullptr;
    }

    std::vector<ScenarioPreset> load_presets(FrequencyMode mode)
    {
        std::vector<ScenarioPreset> out;
        for (std::size_t k = 0; k < kAllScenarios.size(); ++k)
        {
            const Scenario s = kAllScenarios[k];
            const auto &row = kCiTable[k];
            ScenarioPreset p;
            p.scenario = s;
            const bool nlos = s == Scenario::NLoS;
            p.ci_best_140 = ci(row.best_140, nlos ? std::optional(kNlosBest.sigma_140) : std::nullopt, 140, PlKind::best(), s, mode);
            p.ci_best_220 = ci(row.best_220, nlos ? std::optional(kNlosBest.sigma_220) : std::nullopt, 220, PlKind::best(), s, mode);
            p.ci_omni_140 = ci(row.omni_140, std::nullopt, 140, PlKind::omni(), s, mode);
            p.ci_omni_220 = ci(row.omni_220, std::nullopt, 220, PlKind::omni(), s, mode);
            p.abg_best = abg(kAbgBest[k]);
            p.abg_omni = abg(kAbgOmni[k]);
            p.cif_best = cif(kCifBest[k]);
            p.cif_omni = cif(kCifOmni[k]);
            if (nlos)
            {
                for (int n = 1; n <= 5; ++n)
                {
                    const auto &c = kNlosCoherent[static_cast<std::size_t>(n - 1)];
                    const auto &nc = kNlosNonCoherent[static_cast<std::size_t>(n - 1)];
                    p.coherent.push_back({n, ci(c.ple_140, c.sigma_140, 140, PlKind::coherent(n), s, mode),
                                          ci(c.ple_220, c.sigma_220, 220, PlKind::coherent(n), s, mode)});
                    p.noncoherent.push_back({n, ci(nc.ple_140, nc.sigma_140, 140, PlKind::noncoherent(n), s, mode),
                                             ci(nc.ple_220, nc.sigma_220, 220, PlKind::noncoherent(n), s, mode)});
                }
            }
            out.push_back(std::move(p));
        }
        return out;
    }

    const ScenarioPreset &find_preset(const std::vector<ScenarioPreset> &presets, Scenario scenario)
    {
        for (const auto &p : presets)
            if (p.scenario == scenario)
                return p;
        throw Error(ErrorCode::UnknownScenario, "no preset for scenario " + std::string(scenario_name(scenario)));
    }

    std::string presets_to_json(const std::vector<ScenarioPreset> &presets)
    {
        json doc;
        doc["schema_version"] = kPresetSchema;
        json scenarios = json::array();
        for (const auto &p : presets)
        {
            json j;
            j["scenario"] = scenario_name(p.scenario);
            j["title"] = scenario_title(p.scenario);
            j["ci"]["best"]["140"] = to_json(p.ci_best_140);
            j["ci"]["best"]["220"] = to_json(p.ci_best_220);
            j["ci"]["omni"]["140"] = to_json(p.ci_omni_140);
            j["ci"]["omni"]["220"] = to_json(p.ci_omni_220);
            j["abg"]["best"] = to_json(p.abg_best, "II");
            j["abg"]["omni"] = to_json(p.abg_omni, "IV");
            j["cif"]["best"] = to_json(p.cif_best, "III");
            j["cif"]["omni"] = to_json(p.cif_omni, "IV");
            j["beam_combination"]["coherent"] = to_json(p.coherent);
            j["beam_combination"]["noncoherent"] = to_json(p.noncoherent);
            scenarios.push_back(std::move(j));
        }
        doc["scenarios"] = std::move(scenarios);
        return doc.dump(2) + "\n";
    }

    std::vector<ScenarioPreset> presets_from_json(const std::string &text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::exception &e)
        {
            throw Error(ErrorCode::ParseError, std::string("preset JSON: ") + e.what());
        }
        try
        {
            if (doc.at("schema_version").get<int>() != kPresetSchema)
                throw Error(ErrorCode::SchemaVersion, "unsupported preset schema version");
            std::vector<ScenarioPreset> out;
            for (const auto &j : doc.at("scenarios"))
            {
                ScenarioPreset p;
                p.scenario = parse_scenario(j.at("scenario").get<std::string>());
                p.ci_best_140 = ci_from_json(j.at("ci").at("best").at("140"), p.scenario);
                p.ci_best_220 = ci_from_json(j.at("ci").at("best").at("220"), p.scenario);
                p.ci_omni_140 = ci_from_json(j.at("ci").at("omni").at("140"), p.scenario);
                p.ci_omni_220 = ci_from_json(j.at("ci").at("omni").at("220"), p.scenario);
                p.abg_best = abg_from_json(j.at("abg").at("best"));
                p.abg_omni = abg_from_json(j.at("abg").at("omni"));
                p.cif_best = cif_from_json(j.at("cif").at("best"));
                p.cif_omni = cif_from_json(j.at("cif").at("omni"));
                p.coherent = rows_from_json(j.at("beam_combination").at("coherent"), p.scenario);
                p.noncoherent = rows_from_json(j.at("beam_combination").at("noncoherent"), p.scenario);
                out.push_back(std::move(p));
            }
            return out;
        }
        catch (const json::exception &e)
        {
            throw Error(ErrorCode::ParseError, std::string("preset JSON: ") + e.what());
        }
    }
}
