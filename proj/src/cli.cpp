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

#include "thzpl/cli.hpp"

#include "thzpl/archive.hpp"
#include "thzpl/calibration.hpp"
#include "thzpl/extraction.hpp"
#include "thzpl/fitting.hpp"
#include "thzpl/io.hpp"
#include "thzpl/models.hpp"
#include "thzpl/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace thzpl
{
    namespace
    {
        namespace fs = std::filesystem;
        using json = nlohmann::ordered_json;

        // Band filter: "140", "220" or "all"; samples go to the nearest nominal band
        bool in_band(double f_ghz, const std::string &band)
        {
            if (band == "all")
                return true;
            const bool low = std::abs(f_ghz - 140.0) <= std::abs(f_ghz - 220.0);
            return band == "140" ? low : !low;
        }

        int band_number(const std::string &band)
        {
            if (band == "140")
                return 140;
            if (band == "220")
                return 220;
            throw Error(ErrorCode::ParseError, "--band must be 140 or 220 here");
        }

        PlKind kind_from_flags(const std::string &kind, int beams)
        {
            if (kind == "best")
                return PlKind::best();
            if (kind == "omni")
                return PlKind::omni();
            if (kind.find('-') != std::string::npos)
                return parse_pl_kind(kind); // "coherent-5" form
            if (beams < 1)
                throw Error(ErrorCode::InvalidBeamCount, "--beams must be at least 1");
            if (kind == "coherent")
                return PlKind::coherent(beams);
            if (kind == "noncoherent")
                return PlKind::noncoherent(beams);
            throw Error(ErrorCode::ParseError, "unknown --kind '" + kind + "'");
        }

        fs::path resolve_run_dir(const std::string &flag)
        {
            if (!flag.empty())
                return flag;
            if (const char *env = std::getenv("THZPL_RUN_DIR"); env && *env)
                return env;
            throw Error(ErrorCode::ParseError, "no run directory: pass --run-dir or set THZPL_RUN_DIR");
        }

        std::vector<double> parse_list(const std::string &text)
        {
            std::vector<double> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                std::size_t used = 0;
                double v = 0.0;
                try
                {
                    v = std::stod(item, &used);
                }
                catch (const std::exception &)
                {
                    used = 0;
                }
                if (used == 0 || used != item.size())
                    throw Error(ErrorCode::ParseError, "bad number '" + item + "' in list");
                out.push_back(v);
            }
            if (out.empty())
                throw Error(ErrorCode::ParseError, "empty list");
            return out;
        }

        // ---- synth --------------------------------------------------------------

        struct SynthArgs
        {
            std::string output;
            std::string scenario = "MeetingRoom";
            std::string band = "140";
            std::string distances;
            std::string mode = "free-space";
            std::optional<std::uint64_t> seed;
            bool with_calibration = false;
            bool no_noise = false;
            double attenuator_db = 30.0;
            double ripple_db = 1.0;
            double grid_step = 10.0;
            double el_min = -20.0;
            double el_max = 20.0;
        };

        Point3 meeting_room_rx(const Room &room, const Point3 &tx, double d)
        {
            const double dx = room.length_m - 2.0 * tx.x;
            const double dy = room.width_m - 2.0 * tx.y;
            const double len = std::hypot(dx, dy);
            return Point3{tx.x + d * dx / len, tx.y + d * dy / len, tx.z};
        }

        int cmd_synth(const SynthArgs &a, std::ostream &out)
        {
            if (!a.seed)
                throw Error(ErrorCode::ParseError, "synth is stochastic and needs --seed");
            const Scenario scenario = parse_scenario(a.scenario);
            SounderConfig cfg = band_number(a.band) == 140 ? sounder_140ghz() : sounder_220ghz();
            cfg.grid = AngularGrid::uniform(0.0, 360.0 - a.grid_step, a.el_min, a.el_max, a.grid_step);
            check_config(cfg);
            const double f_ghz = cfg.band.nominal_ghz();
            const auto distances = parse_list(a.distances);

            SweepFile file;
            std::vector<std::complex<double>> h_system;
            if (a.with_calibration)
            {
                h_system = synthetic_system_response(cfg.band, -20.0, a.ripple_db, 3.5, 2e-9);
                file.calibrations.push_back(
                    {cfg.band.label, make_calibration_record(cfg.band, h_system, flat_attenuator(cfg.band, a.attenuator_db))});
            }

            const Room room = meeting_room();
            const Point3 tx{0.5, 0.5, 1.5};
            for (std::size_t k = 0; k < distances.size(); ++k)
            {
                const std::uint64_t seed = derive_seed(*a.seed, k);
                VirtualEnvironment env;
                if (a.mode == "free-space")
                {
                    // spread the LoS direction over the azimuth grid
                    const double az = cfg.grid.azimuth_deg[(k * 4) % cfg.grid.n_azimuth()];
                    env = free_space_environment(distances[k], f_ghz, az, 0.0, scenario, seed);
                }
                else if (a.mode == "image")
                {
                    const Point3 rx = meeting_room_rx(room, tx, distances[k]);
                    ImageMethodOptions opt;
                    opt.frequency_ghz = f_ghz;
                    env = image_method_environment(room, tx, rx, cfg, opt, scenario, seed);
                }
                else
                    throw Error(ErrorCode::ParseError, "--mode must be free-space or image");

                char id[64];
                std::snprintf(id, sizeof(id), "%s_%s_P%02zu", std::string(scenario_name(scenario)).c_str(),
                              cfg.band.label.c_str(), k + 1);
                Placement placement{id, "TX1", "RX" + std::to_string(k + 1), distances[k]};
                DirectionalScan scan = synthesize_scan(env, cfg, placement, !a.no_noise);
                if (a.with_calibration)
                    scan = apply_system_response(scan, h_system);
                file.scans.push_back(std::move(scan));
            }
            write_sweep_file(a.output, file);

            json j;
            j["output"] = a.output;
            j["scans"] = file.scans.size();
            j["calibrations"] = file.calibrations.size();
            j["seed"] = *a.seed;
            out << j.dump(2) << "\n";
            return 0;
        }

        // ---- ingest -------------------------------------------------------------

        int cmd_ingest(const std::vector<std::string> &inputs, const std::string &run_dir_flag, double grid_step,
                       std::ostream &out)
        {
            const fs::path run_dir = resolve_run_dir(run_dir_flag);
            SweepReadOptions opt;
            opt.grid_step_deg = grid_step;

            SweepFile merged;
            std::set<std::string> ids, cal_names;
            for (const auto &path : inputs)
            {
                auto part = read_sweep_file(path, opt);
                for (auto &s : part.scans)
                {
                    if (!ids.insert(s.scan_id).second)
                        throw Error(ErrorCode::ParseError, path + ": scan '" + s.scan_id + "' appears in more than one input");
                    merged.scans.push_back(std::move(s));
                }
                for (auto &c : part.calibrations)
                {
                    if (!cal_names.insert(c.name).second)
                        throw Error(ErrorCode::ParseError, path + ": calibration '" + c.name + "' appears more than once");
                    merged.calibrations.push_back(std::move(c));
                }
            }

            RunDirLock lock(run_dir);
            out << write_run_archive(run_dir, merged, grid_step);
            return 0;
        }

        // ---- extract ------------------------------------------------------------

        struct ExtractArgs
        {
            std::string run_dir;
            int beams = 5;
            bool noise_gate = false;
            std::string preset_freq = "nominal";
            std::string calibration;
        };

        int cmd_extract(const ExtractArgs &a, std::ostream &out)
        {
            const fs::path run_dir = resolve_run_dir(a.run_dir);
            if (a.beams < 1)
                throw Error(ErrorCode::InvalidBeamCount, "--beams must be at least 1");
            ExtractionOptions options;
            options.noise_gate = a.noise_gate;
            options.frequency_mode = parse_frequency_mode(a.preset_freq);

            RunDirLock lock(run_dir);
            const SweepFile archive = load_run_archive(run_dir);

            const NamedCalibration *forced = nullptr;
            if (!a.calibration.empty())
            {
                for (const auto &c : archive.calibrations)
                    if (c.name == a.calibration)
                        forced = &c;
                if (!forced)
                    throw Error(ErrorCode::ParseError, "no calibration record named '" + a.calibration + "'");
            }

            std::vector<PathLossSample> samples;
            for (const auto &raw : archive.scans)
            {
                const NamedCalibration *cal = forced;
                if (!cal)
                    for (const auto &c : archive.calibrations)
                        if (c.record.band.same_sweep(raw.config.band))
                        {
                            cal = &c;
                            break;
                        }
                const DirectionalScan scan = cal ? calibrate(raw, cal->record) : raw;
                const BeamTable table = beam_average(scan, options);
                for (auto &s : extract_all(table, a.beams))
                    samples.push_back(std::move(s));
            }

            std::ostringstream csv;
            write_samples_csv(csv, samples);
            fs::create_directories(samples_path(run_dir).parent_path());
            write_text_file(samples_path(run_dir), csv.str());
            out << csv.str();
            return 0;
        }

        // ---- fit ----------------------------------------------------------------

        struct FitArgs
        {
            std::string run_dir;
            std::string model;
            std::string kind = "best";
            int beams = 1;
            std::string band = "all";
            std::string scenario;
            std::string name;
        };

        void write_plot_data(const fs::path &dir, const std::string &name, const FitReport &report, const Dataset &data)
        {
            std::map<double, std::vector<const PathLossSample *>> by_freq;
            for (const auto &s : data.samples)
                by_freq[s.frequency_ghz].push_back(&s);
            for (const auto &[f, samples] : by_freq)
            {
                std::vector<const PathLossSample *> sorted = samples;
                std::stable_sort(sorted.begin(), sorted.end(), [](auto *x, auto *y)
                                 { return x->distance_m < y->distance_m; });
                const std::string stem = name + "_" + format_shortest(f) + "GHz";
                std::ostringstream measured;
                measured << "distance_m,pl_db\n";
                double d_max = kReferenceDistanceM;
                for (const auto *s : sorted)
                {
                    measured << format_shortest(s->distance_m) << ',' << format_shortest(round_significant(s->pl_db)) << '\n';
                    d_max = std::max(d_max, s->distance_m);
                }
                write_text_file(dir / (stem + "_measured.csv"), measured.str());

                std::ostringstream curve;
                curve << "distance_m,pl_db\n";
                constexpr int kCurvePoints = 50;
                for (int k = 0; k < kCurvePoints; ++k)
                {
                    const double d = kReferenceDistanceM * std::pow(d_max / kReferenceDistanceM, k / double(kCurvePoints - 1));
                    curve << format_shortest(round_significant(d)) << ','
                          << format_shortest(round_significant(predict(report.model, d, f))) << '\n';
                }
                write_text_file(dir / (stem + "_model.csv"), curve.str());
            }
        }

        int cmd_fit(const FitArgs &a, std::ostream &out)
        {
            const fs::path run_dir = resolve_run_dir(a.run_dir);
            const PlKind kind = kind_from_flags(a.kind, a.beams);
            if (a.band != "all" && a.band != "140" && a.band != "220")
                throw Error(ErrorCode::ParseError, "--band must be 140, 220 or all");
            std::optional<Scenario> scenario;
            if (!a.scenario.empty())
                scenario = parse_scenario(a.scenario);

            RunDirLock lock(run_dir);
            const fs::path samples_file = samples_path(run_dir);
            if (!fs::exists(samples_file))
                throw Error(ErrorCode::IoError, "no extracted samples in " + run_dir.string() + " (run extract first)");
            std::ifstream in(samples_file, std::ios::binary);
            const auto all = read_samples_csv(in, samples_file.string());

            Dataset data;
            for (const auto &s : all)
                if (s.kind == kind && in_band(s.frequency_ghz, a.band) && (!scenario || s.scenario == *scenario))
                    data.samples.push_back(s);
            if (data.samples.empty())
                throw Error(ErrorCode::EmptyDataset, "no samples of kind " + to_string(kind) + " in band " + a.band);

            FitReport report;
            if (a.model == "ci")
            {
                const auto counts = data.frequency_counts();
                if (counts.size() != 1)
                    throw Error(ErrorCode::MixedFrequency, "CI fit needs a single frequency; restrict with --band");
                report = fit_ci(data, counts.front().frequency_ghz);
            }
            else if (a.model == "abg")
                report = fit_abg(data);
            else if (a.model == "cif")
                report = fit_cif(data);
            else
                throw Error(ErrorCode::ParseError, "--model must be ci, abg or cif");

            std::string name = a.name;
            if (name.empty())
            {
                name = a.model + "_" + to_string(kind) + "_" + a.band;
                if (scenario)
                    name += "_" + std::string(scenario_name(*scenario));
            }
            name = sanitize_id(name);
            const std::string text = fit_report_json(report, data);
            fs::create_directories(fits_dir(run_dir));
            write_text_file(fits_dir(run_dir) / (name + ".json"), text);
            write_plot_data(fits_dir(run_dir), name, report, data);
            out << text;
            return 0;
        }

        // ---- predict ------------------------------------------------------------

        struct PredictArgs
        {
            std::string scenario;
            std::string model;
            std::string kind = "best";
            int beams = 1;
            std::string band = "140";
            double distance = 0.0;
            std::optional<double> freq;
            std::optional<std::uint64_t> seed;
            std::string preset_freq = "nominal";
        };

        int cmd_predict(const PredictArgs &a, std::ostream &out)
        {
            const Scenario scenario = parse_scenario(a.scenario);
            const PlKind kind = kind_from_flags(a.kind, a.beams);
            const auto presets = load_presets(parse_frequency_mode(a.preset_freq));
            const ScenarioPreset &preset = find_preset(presets, scenario);

            PathLossModel model;
            double f_ghz = 0.0;
            json j;
            j["scenario"] = scenario_name(scenario);
            j["model"] = a.model;
            j["kind"] = to_string(kind);
            if (a.model == "ci")
            {
                const int band = band_number(a.band);
                const CiModel *ci = preset.find_ci(kind, band);
                if (!ci)
                    throw Error(ErrorCode::DomainError, "no published CI model for " + to_string(kind) + " at " + a.band +
                                                            " GHz in " + std::string(scenario_name(scenario)));
                model = *ci;
                f_ghz = ci->frequency_ghz;
                j["band"] = band;
            }
            else if (a.model == "abg" || a.model == "cif")
            {
                if (kind.type != PlKind::Type::BestDirection && kind.type != PlKind::Type::Omni)
                    throw Error(ErrorCode::DomainError, "multi-band presets exist for best and omni only");
                if (!a.freq)
                    throw Error(ErrorCode::ParseError, "--freq is required for multi-band models");
                const bool best = kind.type == PlKind::Type::BestDirection;
                if (a.model == "abg")
                    model = best ? preset.abg_best : preset.abg_omni;
                else
                    model = best ? preset.cif_best : preset.cif_omni;
                f_ghz = *a.freq;
            }
            else
                throw Error(ErrorCode::ParseError, "--model must be ci, abg or cif");

            const double mean = predict(model, a.distance, f_ghz);
            double pl = mean;
            j["distance_m"] = round_significant(a.distance);
            j["frequency_ghz"] = round_significant(f_ghz);
            j["mean_pl_db"] = round_significant(mean);
            if (a.seed)
            {
                const auto sigma = sigma_sf_db(model);
                if (!sigma)
                    throw Error(ErrorCode::DomainError, "this preset publishes no shadow-fading sigma to sample from");
                ShadowFading fading(*a.seed);
                const double x = fading.draw(*sigma);
                pl = mean + x;
                j["seed"] = *a.seed;
                j["shadow_fading_db"] = round_significant(x);
            }
            j["pl_db"] = round_significant(pl);
            out << j.dump(2) << "\n";
            return 0;
        }
    }

    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Sub-THz directional path-loss toolkit", "thzpl"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");

        const char *kinds = "best, omni, coherent or noncoherent";

        SynthArgs synth;
        auto *synth_cmd = app.add_subcommand("synth", "Write a synthetic sweep CSV campaign");
        synth_cmd->add_option("--output", synth.output, "Sweep CSV to write")->required();
        synth_cmd->add_option("--scenario", synth.scenario, "Scenario label");
        synth_cmd->add_option("--band", synth.band, "140 or 220");
        synth_cmd->add_option("--distances", synth.distances, "Comma-separated Tx-Rx distances [m]")->required();
        synth_cmd->add_option("--mode", synth.mode, "free-space or image (meeting room, order <= 3)");
        synth_cmd->add_option("--seed", synth.seed, "Base seed; placement k uses derive_seed(seed, k)");
        synth_cmd->add_flag("--with-calibration", synth.with_calibration, "Embed a synthetic system response and emit a CAL record");
        synth_cmd->add_flag("--no-noise", synth.no_noise, "Skip receiver noise");
        synth_cmd->add_option("--attenuator-db", synth.attenuator_db, "Calibration attenuator loss [dB]");
        synth_cmd->add_option("--ripple-db", synth.ripple_db, "System response ripple [dB]");
        synth_cmd->add_option("--grid-step", synth.grid_step, "Angular step [deg]");
        synth_cmd->add_option("--el-min", synth.el_min, "Lowest elevation [deg]");
        synth_cmd->add_option("--el-max", synth.el_max, "Highest elevation [deg]");

        std::vector<std::string> inputs;
        std::string ingest_run_dir;
        double ingest_step = 10.0;
        auto *ingest_cmd = app.add_subcommand("ingest", "Parse and validate sweep CSVs into a run directory");
        ingest_cmd->add_option("--input", inputs, "Sweep CSV file (repeatable)")->required()->check(CLI::ExistingFile);
        ingest_cmd->add_option("--run-dir", ingest_run_dir, "Run directory (default $THZPL_RUN_DIR)");
        ingest_cmd->add_option("--grid-step", ingest_step, "Angular step of the scan grid [deg]");

        ExtractArgs extract;
        auto *extract_cmd = app.add_subcommand("extract", "Calibrate scans and extract path-loss samples");
        extract_cmd->add_option("--run-dir", extract.run_dir, "Run directory (default $THZPL_RUN_DIR)");
        extract_cmd->add_option("--beams", extract.beams, "Largest beam count for combinations");
        extract_cmd->add_flag("--noise-gate", extract.noise_gate, "Zero directions below the noise floor");
        extract_cmd->add_option("--preset-freq", extract.preset_freq, "nominal or center band frequency");
        extract_cmd->add_option("--calibration", extract.calibration, "Calibration record to apply to every scan");

        FitArgs fit;
        auto *fit_cmd = app.add_subcommand("fit", "Fit a path-loss model to extracted samples");
        fit_cmd->add_option("--run-dir", fit.run_dir, "Run directory (default $THZPL_RUN_DIR)");
        fit_cmd->add_option("--model", fit.model, "ci, abg or cif")->required();
        fit_cmd->add_option("--kind", fit.kind, kinds);
        fit_cmd->add_option("--beams", fit.beams, "Beam count for combined kinds");
        fit_cmd->add_option("--band", fit.band, "140, 220 or all");
        fit_cmd->add_option("--scenario", fit.scenario, "Restrict to one scenario");
        fit_cmd->add_option("--name", fit.name, "Output name under fits/");

        PredictArgs pred;
        auto *predict_cmd = app.add_subcommand("predict", "Path loss from the published scenario presets");
        predict_cmd->add_option("--scenario", pred.scenario, "MeetingRoom, OfficeArea, Hallway or NLoS")->required();
        predict_cmd->add_option("--model", pred.model, "ci, abg or cif")->required();
        predict_cmd->add_option("--kind", pred.kind, kinds);
        predict_cmd->add_option("--beams", pred.beams, "Beam count for combined kinds");
        predict_cmd->add_option("--band", pred.band, "140 or 220 (CI models)");
        predict_cmd->add_option("--distance", pred.distance, "Tx-Rx distance [m]")->required();
        predict_cmd->add_option("--freq", pred.freq, "Frequency [GHz] (ABG and CIF models)");
        predict_cmd->add_option("--seed", pred.seed, "Draw one shadow-fading sample with this seed");
        predict_cmd->add_option("--preset-freq", pred.preset_freq, "nominal or center band frequency");

        std::string presets_mode = "nominal";
        auto *presets_cmd = app.add_subcommand("presets", "Export the published presets as JSON");
        presets_cmd->add_option("--preset-freq", presets_mode, "nominal or center band frequency");

        auto report = [&](ErrorCode code, const std::string &message)
        {
            json j;
            j["error"] = error_code_name(code);
            j["exit_code"] = exit_status(code);
            j["message"] = message;
            err << j.dump() << "\n";
            return exit_status(code);
        };

        try
        {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return 0;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            return report(ErrorCode::ParseError, e.what());
        }

        try
        {
            if (*synth_cmd)
                return cmd_synth(synth, out);
            if (*ingest_cmd)
                return cmd_ingest(inputs, ingest_run_dir, ingest_step, out);
            if (*extract_cmd)
                return cmd_extract(extract, out);
            if (*fit_cmd)
                return cmd_fit(fit, out);
            if (*predict_cmd)
                return cmd_predict(pred, out);
            if (*presets_cmd)
            {
                out << presets_to_json(load_presets(parse_frequency_mode(presets_mode)));
                return 0;
            }
        }
        catch (const Error &e)
        {
            return report(e.code(), e.what());
        }
        catch (const std::filesystem::filesystem_error &e)
        {
            return report(ErrorCode::IoError, e.what());
        }
        return report(ErrorCode::ParseError, "no subcommand");
    }
}
