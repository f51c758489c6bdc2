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

#include "thzpl/archive.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <set>

namespace thzpl
{
    namespace fs = std::filesystem;

    namespace
    {
        using json = nlohmann::ordered_json;

        json band_json(const FrequencyBand &band)
        {
            json j;
            j["label"] = band.label;
            j["start_hz"] = band.start_hz;
            j["end_hz"] = band.end_hz;
            j["n_points"] = band.n_points;
            return j;
        }

        json sounder_json(const SounderConfig &cfg)
        {
            json j;
            j["band"] = band_json(cfg.band);
            j["azimuth_deg"] = {cfg.grid.azimuth_deg.front(), cfg.grid.azimuth_deg.back()};
            j["elevation_deg"] = {cfg.grid.elevation_deg.front(), cfg.grid.elevation_deg.back()};
            j["grid_step_deg"] = cfg.grid.step_deg;
            j["tx_gain_dbi"] = cfg.tx_gain_dbi;
            j["rx_gain_dbi"] = cfg.rx_gain_dbi;
            j["tx_power_dbm"] = cfg.tx_power_dbm;
            j["noise_floor_dbm"] = cfg.noise_floor_dbm;
            j["tx_hpbw_deg"] = cfg.tx_hpbw_deg;
            j["rx_hpbw_deg"] = cfg.rx_hpbw_deg;
            return j;
        }

        void apply_sounder_json(const json &j, SounderConfig &cfg)
        {
            cfg.band.label = j.at("band").at("label").get<std::string>();
            cfg.tx_gain_dbi = j.at("tx_gain_dbi").get<double>();
            cfg.rx_gain_dbi = j.at("rx_gain_dbi").get<double>();
            cfg.tx_power_dbm = j.at("tx_power_dbm").get<double>();
            cfg.noise_floor_dbm = j.at("noise_floor_dbm").get<double>();
            cfg.tx_hpbw_deg = j.at("tx_hpbw_deg").get<double>();
            cfg.rx_hpbw_deg = j.at("rx_hpbw_deg").get<double>();
        }

        std::string scan_file(const std::string &id) { return "scans/" + sanitize_id(id) + ".csv"; }
        std::string cal_file(const std::string &name) { return "scans/cal_" + sanitize_id(name) + ".csv"; }
    }

    RunDirLock::RunDirLock(const fs::path &run_dir) : lock_path_(run_dir / ".lock")
    {
        std::error_code ec;
        fs::create_directories(run_dir, ec);
        if (ec)
            throw Error(ErrorCode::IoError, "cannot create run directory " + run_dir.string() + ": " + ec.message());
        std::FILE *f = std::fopen(lock_path_.c_str(), "wx");
        if (!f)
        {
            if (errno == EEXIST)
                throw Error(ErrorCode::Locked, "run directory " + run_dir.string() + " is locked by another process");
            throw Error(ErrorCode::IoError, "cannot create " + lock_path_.string() + ": " + std::strerror(errno));
        }
        std::fclose(f);
    }

    RunDirLock::~RunDirLock()
    {
        std::error_code ec;
        fs::remove(lock_path_, ec);
    }

    std::string sanitize_id(const std::string &id)
    {
        std::string out;
        for (char c : id)
        {
            const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                            c == '_' || c == '.';
            out.push_back(ok ? c : '_');
        }
        return out.empty() ? std::string("_") : out;
    }

    fs::path samples_path(const fs::path &run_dir) { return run_dir / "samples" / "samples.csv"; }
    fs::path fits_dir(const fs::path &run_dir) { return run_dir / "fits"; }

    std::string manifest_json(const SweepFile &file, double grid_step_deg)
    {
        json j;
        j["schema_version"] = kManifestSchemaVersion;
        j["grid_step_deg"] = grid_step_deg;
        json scans = json::array();
        for (const auto &s : file.scans)
        {
            json e;
            e["scan_id"] = s.scan_id;
            e["scenario"] = scenario_name(s.scenario);
            e["tx_id"] = s.tx_id;
            e["rx_id"] = s.rx_id;
            e["distance_m"] = s.distance_m;
            e["file"] = scan_file(s.scan_id);
            e["sounder"] = sounder_json(s.config);
            scans.push_back(std::move(e));
        }
        j["scans"] = std::move(scans);
        json cals = json::array();
        for (const auto &c : file.calibrations)
        {
            json e;
            e["name"] = c.name;
            e["file"] = cal_file(c.name);
            e["band"] = band_json(c.record.band);
            cals.push_back(std::move(e));
        }
        j["calibrations"] = std::move(cals);
        return j.dump(2) + "\n";
    }

    std::string write_run_archive(const fs::path &run_dir, const SweepFile &file, double grid_step_deg)
    {
        std::set<std::string> files;
        for (const auto &s : file.scans)
        {
            validate_scan(s);
            if (!files.insert(scan_file(s.scan_id)).second)
                throw Error(ErrorCode::ParseError, "scan id '" + s.scan_id + "' collides with another scan");
        }
        for (const auto &c : file.calibrations)
        {
            check_calibration(c.record);
            if (!files.insert(cal_file(c.name)).second)
                throw Error(ErrorCode::ParseError, "calibration '" + c.name + "' collides with another record");
        }

        std::error_code ec;
        fs::create_directories(run_dir / "scans", ec);
        if (ec)
            throw Error(ErrorCode::IoError, "cannot create " + (run_dir / "scans").string() + ": " + ec.message());

        for (const auto &s : file.scans)
            write_sweep_file(run_dir / scan_file(s.scan_id), SweepFile{{s}, {}});
        for (const auto &c : file.calibrations)
            write_sweep_file(run_dir / cal_file(c.name), SweepFile{{}, {c}});

        const std::string manifest = manifest_json(file, grid_step_deg);
        write_text_file(run_dir / "manifest.json", manifest);
        return manifest;
    }

    SweepFile load_run_archive(const fs::path &run_dir)
    {
        const fs::path manifest_path = run_dir / "manifest.json";
        if (!fs::exists(manifest_path))
            throw Error(ErrorCode::IoError, "no manifest.json in " + run_dir.string() + " (run ingest first)");
        json m;
        try
        {
            m = json::parse(read_text_file(manifest_path));
        }
        catch (const json::exception &e)
        {
            throw Error(ErrorCode::ParseError, manifest_path.string() + ": " + e.what());
        }

        try
        {
            if (m.at("schema_version").get<int>() != kManifestSchemaVersion)
                throw Error(ErrorCode::SchemaVersion, manifest_path.string() + ": unsupported manifest schema version");
            SweepReadOptions opt;
            opt.grid_step_deg = m.at("grid_step_deg").get<double>();

            SweepFile out;
            for (const auto &e : m.at("scans"))
            {
                auto part = read_sweep_file(run_dir / e.at("file").get<std::string>(), opt);
                if (part.scans.size() != 1 || part.scans.front().scan_id != e.at("scan_id").get<std::string>())
                    throw Error(ErrorCode::ParseError, "archive file " + e.at("file").get<std::string>() +
                                                           " does not hold scan " + e.at("scan_id").get<std::string>());
                auto scan = std::move(part.scans.front());
                apply_sounder_json(e.at("sounder"), scan.config);
                out.scans.push_back(std::move(scan));
            }
            for (const auto &e : m.at("calibrations"))
            {
                auto part = read_sweep_file(run_dir / e.at("file").get<std::string>(), opt);
                if (part.calibrations.size() != 1)
                    throw Error(ErrorCode::ParseError, "archive file " + e.at("file").get<std::string>() +
                                                           " does not hold one calibration record");
                auto cal = std::move(part.calibrations.front());
                cal.record.band.label = e.at("band").at("label").get<std::string>();
                out.calibrations.push_back(std::move(cal));
            }
            return out;
        }
        catch (const json::exception &e)
        {
            throw Error(ErrorCode::ParseError, manifest_path.string() + ": " + e.what());
        }
    }
}
