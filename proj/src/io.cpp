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

#include "thzpl/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace thzpl
{
    namespace
    {
        using json = nlohmann::ordered_json;

        constexpr double kGridTolDeg = 1e-6;

        [[noreturn]] void parse_fail(const std::string &source, std::size_t line, const std::string &what)
        {
            throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
        }

        std::vector<std::string_view> split(std::string_view line)
        {
            std::vector<std::string_view> fields;
            std::size_t start = 0;
            while (true)
            {
                const auto comma = line.find(',', start);
                if (comma == std::string_view::npos)
                {
                    fields.push_back(line.substr(start));
                    break;
                }
                fields.push_back(line.substr(start, comma - start));
                start = comma + 1;
            }
            return fields;
        }

        double parse_double(std::string_view text, const std::string &source, std::size_t line, const char *column)
        {
            double value = 0.0;
            const char *first = text.data();
            const char *last = text.data() + text.size();
            if (!text.empty() && *first == '+')
                ++first;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (text.empty() || ec != std::errc() || ptr != last)
                parse_fail(source, line, std::string("bad number '") + std::string(text) + "' in column " + column);
            return value;
        }

        bool getline_lf(std::istream &in, std::string &line)
        {
            if (!std::getline(in, line))
                return false;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return true;
        }

        // Leading schema line and header; returns the number of lines consumed
        std::size_t read_preamble(std::istream &in, std::string_view header, std::string_view schema_tag, int version,
                                  const std::string &source)
        {
            std::string line;
            std::size_t line_no = 0;
            if (!getline_lf(in, line))
                parse_fail(source, 1, "empty file, header is mandatory");
            ++line_no;
            const std::string prefix = "# " + std::string(schema_tag) + " v";
            if (line.rfind(prefix, 0) == 0)
            {
                int found = 0;
                const auto rest = std::string_view(line).substr(prefix.size());
                auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), found);
                if (ec != std::errc() || ptr != rest.data() + rest.size())
                    parse_fail(source, line_no, "malformed schema line");
                if (found != version)
                    throw Error(ErrorCode::SchemaVersion, source + ": schema version " + std::to_string(found) +
                                                              " is not supported (expected " + std::to_string(version) + ")");
                if (!getline_lf(in, line))
                    parse_fail(source, 2, "missing header");
                ++line_no;
            }
            if (line != header)
                parse_fail(source, line_no, "unexpected header '" + line + "'");
            return line_no;
        }

        struct Row
        {
            double az, el, freq, re, im;
            std::size_t line;
        };

        struct ScanRows
        {
            std::string id, scenario, tx, rx;
            double distance = 0.0;
            std::vector<Row> rows;
        };

        struct CalRows
        {
            std::string name;
            std::vector<Row> s_cal, h_att;
            std::size_t first_line = 0;
        };

        std::string band_label(const FrequencyBand &band)
        {
            if (band.same_sweep(band_140ghz()))
                return band_140ghz().label;
            if (band.same_sweep(band_220ghz()))
                return band_220ghz().label;
            return format_shortest(std::round(band.center_hz() * 1e-8) / 10.0) + "GHz";
        }

        FrequencyBand band_from_rows(const std::vector<Row> &rows, std::vector<double> &freqs, const std::string &source,
                                     const std::string &id)
        {
            freqs.clear();
            for (const auto &r : rows)
                freqs.push_back(r.freq);
            std::sort(freqs.begin(), freqs.end());
            freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
            const std::size_t first = rows.empty() ? 0 : rows.front().line;
            if (freqs.size() < 2)
                parse_fail(source, first, "'" + id + "' has fewer than two sweep frequencies");
            FrequencyBand band{freqs.front(), freqs.back(), freqs.size(), ""};
            try
            {
                check_band(band);
            }
            catch (const Error &e)
            {
                parse_fail(source, first, "'" + id + "': " + e.what());
            }
            const double tol = 1e-6 * band.step_hz();
            for (std::size_t s = 0; s < freqs.size(); ++s)
                if (std::abs(freqs[s] - band.frequency_hz(s)) > tol)
                    parse_fail(source, first, "'" + id + "' frequency sweep is not uniformly spaced");
            band.label = band_label(band);
            return band;
        }

        std::size_t freq_index(const std::vector<double> &freqs, double f)
        {
            return static_cast<std::size_t>(std::lower_bound(freqs.begin(), freqs.end(), f) - freqs.begin());
        }

        long grid_index(double angle, double step, double lo, double hi, bool hi_inclusive, const char *axis,
                        const std::string &source, std::size_t line)
        {
            const double k = std::round(angle / step);
            const bool in_range = angle >= lo - kGridTolDeg && (hi_inclusive ? angle <= hi + kGridTolDeg : angle < hi - kGridTolDeg);
            if (std::abs(angle - k * step) > kGridTolDeg || !in_range)
            {
                std::ostringstream msg;
                msg << "off-grid " << axis << " " << angle << " deg for a " << step << " deg step";
                parse_fail(source, line, msg.str());
            }
            return static_cast<long>(k);
        }

        DirectionalScan build_scan(const ScanRows &src, const SweepReadOptions &opt)
        {
            const std::string &source = opt.source;
            std::vector<double> freqs;
            const FrequencyBand band = band_from_rows(src.rows, freqs, source, src.id);

            long az_lo = 0, az_hi = 0, el_lo = 0, el_hi = 0;
            std::vector<std::pair<long, long>> keys;
            keys.reserve(src.rows.size());
            for (std::size_t k = 0; k < src.rows.size(); ++k)
            {
                const auto &r = src.rows[k];
                const long a = grid_index(r.az, opt.grid_step_deg, 0.0, 360.0, false, "azimuth", source, r.line);
                const long e = grid_index(r.el, opt.grid_step_deg, -90.0, 90.0, true, "elevation", source, r.line);
                if (k == 0)
                {
                    az_lo = az_hi = a;
                    el_lo = el_hi = e;
                }
                az_lo = std::min(az_lo, a);
                az_hi = std::max(az_hi, a);
                el_lo = std::min(el_lo, e);
                el_hi = std::max(el_hi, e);
                keys.emplace_back(a, e);
            }

            const double step = opt.grid_step_deg;
            AngularGrid grid = AngularGrid::uniform(static_cast<double>(az_lo) * step, static_cast<double>(az_hi) * step,
                                                    static_cast<double>(el_lo) * step, static_cast<double>(el_hi) * step, step);

            DirectionalScan scan;
            scan.scan_id = src.id;
            scan.tx_id = src.tx;
            scan.rx_id = src.rx;
            scan.distance_m = src.distance;
            try
            {
                scan.scenario = parse_scenario(src.scenario);
            }
            catch (const Error &e)
            {
                parse_fail(source, src.rows.front().line, e.what());
            }
            scan.config = default_sounder_for(band, grid);
            scan.s21 = ChannelCube(grid.n_azimuth(), grid.n_elevation(), band.n_points);

            std::vector<bool> seen(scan.s21.size(), false);
            for (std::size_t k = 0; k < src.rows.size(); ++k)
            {
                const auto &r = src.rows[k];
                const auto i = static_cast<std::size_t>(keys[k].first - az_lo);
                const auto j = static_cast<std::size_t>(keys[k].second - el_lo);
                const auto s = freq_index(freqs, r.freq);
                const auto off = scan.s21.offset(i, j, s);
                if (seen[off])
                    parse_fail(source, r.line, "duplicate sample for '" + src.id + "'");
                seen[off] = true;
                scan.s21.values()[off] = {r.re, r.im};
            }
            const auto missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
            if (missing > 0)
                parse_fail(source, src.rows.front().line,
                           "'" + src.id + "' is missing " + std::to_string(missing) + " of " +
                               std::to_string(seen.size()) + " grid samples");
            return scan;
        }

        NamedCalibration build_calibration(const CalRows &src, const SweepReadOptions &opt)
        {
            if (src.s_cal.empty() || src.h_att.empty())
                parse_fail(opt.source, src.first_line,
                           "calibration '" + src.name + "' needs both s_calibration and h_attenuator rows");
            std::vector<double> freqs, att_freqs;
            const FrequencyBand band = band_from_rows(src.s_cal, freqs, opt.source, src.name);
            const FrequencyBand att_band = band_from_rows(src.h_att, att_freqs, opt.source, src.name);
            if (!band.same_sweep(att_band) || src.s_cal.size() != band.n_points || src.h_att.size() != band.n_points)
                parse_fail(opt.source, src.first_line,
                           "calibration '" + src.name + "' needs exactly one s_calibration and one h_attenuator row per frequency");

            NamedCalibration out{src.name, CalibrationRecord{band, std::vector<std::complex<double>>(band.n_points),
                                                             std::vector<std::complex<double>>(band.n_points)}};
            for (const auto &r : src.s_cal)
                out.record.s_calibration[freq_index(freqs, r.freq)] = {r.re, r.im};
            for (const auto &r : src.h_att)
                out.record.h_attenuator[freq_index(freqs, r.freq)] = {r.re, r.im};
            return out;
        }

        void write_row(std::ostream &out, std::string_view id, std::string_view scenario, std::string_view tx,
                       std::string_view rx, const std::string &distance, double az, double el, double f,
                       std::complex<double> h)
        {
            out << id << ',' << scenario << ',' << tx << ',' << rx << ',' << distance << ',' << format_shortest(az) << ','
                << format_shortest(el) << ',' << format_shortest(f) << ',' << format_shortest(h.real()) << ','
                << format_shortest(h.imag()) << '\n';
        }

        json number(double v) { return json(round_significant(v)); }

        json optional_number(const std::optional<double> &v) { return v ? number(*v) : json(nullptr); }
    }

    std::string format_shortest(double value)
    {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, ptr);
    }

    double round_significant(double value, int digits)
    {
        if (!std::isfinite(value))
            return value;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
        return std::strtod(buf, nullptr);
    }

    SounderConfig default_sounder_for(const FrequencyBand &band, const AngularGrid &grid)
    {
        SounderConfig cfg = band.same_sweep(band_220ghz()) ? sounder_220ghz() : sounder_140ghz();
        cfg.band = band;
        cfg.grid = grid;
        return cfg;
    }

    SweepFile read_sweep_csv(std::istream &in, const SweepReadOptions &options)
    {
        const std::string &source = options.source;
        if (!(options.grid_step_deg > 0.0))
            throw Error(ErrorCode::InvalidGrid, "grid step must be positive");
        std::size_t line_no = read_preamble(in, kSweepHeader, "thzpl-sweep", kSweepSchemaVersion, source);

        std::vector<ScanRows> scans;
        std::vector<CalRows> cals;
        std::map<std::string, std::size_t, std::less<>> scan_index, cal_index;

        std::string line;
        while (getline_lf(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const auto f = split(line);
            if (f.size() != 10)
                parse_fail(source, line_no, "expected 10 columns, found " + std::to_string(f.size()));
            if (f[0].empty())
                parse_fail(source, line_no, "empty scan_id");

            Row row{0.0, 0.0, parse_double(f[7], source, line_no, "freq_hz"), parse_double(f[8], source, line_no, "s21_re"),
                    parse_double(f[9], source, line_no, "s21_im"), line_no};

            if (f[0].substr(0, kCalibrationPrefix.size()) == kCalibrationPrefix)
            {
                const std::string name(f[0].substr(kCalibrationPrefix.size()));
                auto [it, inserted] = cal_index.try_emplace(name, cals.size());
                if (inserted)
                    cals.push_back(CalRows{name, {}, {}, line_no});
                auto &cal = cals[it->second];
                if (f[2] == "s_calibration")
                    cal.s_cal.push_back(row);
                else if (f[2] == "h_attenuator")
                    cal.h_att.push_back(row);
                else
                    parse_fail(source, line_no, "calibration record type must be s_calibration or h_attenuator");
                continue;
            }

            row.az = parse_double(f[5], source, line_no, "azimuth_deg");
            row.el = parse_double(f[6], source, line_no, "elevation_deg");
            const double distance = parse_double(f[4], source, line_no, "distance_m");

            auto [it, inserted] = scan_index.try_emplace(std::string(f[0]), scans.size());
            if (inserted)
                scans.push_back(ScanRows{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]), distance, {}});
            auto &scan = scans[it->second];
            if (scan.scenario != f[1] || scan.tx != f[2] || scan.rx != f[3] || scan.distance != distance)
                parse_fail(source, line_no, "placement metadata changes within scan '" + scan.id + "'");
            scan.rows.push_back(row);
        }

        SweepFile out;
        for (const auto &s : scans)
            out.scans.push_back(build_scan(s, options));
        for (const auto &c : cals)
            out.calibrations.push_back(build_calibration(c, options));
        return out;
    }

    SweepFile read_sweep_file(const std::filesystem::path &path, SweepReadOptions options)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open " + path.string());
        options.source = path.string();
        return read_sweep_csv(in, options);
    }

    void write_sweep_csv(std::ostream &out, const SweepFile &file)
    {
        out << "# thzpl-sweep v" << kSweepSchemaVersion << '\n' << kSweepHeader << '\n';
        for (const auto &scan : file.scans)
        {
            const auto &grid = scan.config.grid;
            const std::string distance = format_shortest(scan.distance_m);
            for (std::size_t i = 0; i < scan.s21.n_azimuth(); ++i)
                for (std::size_t j = 0; j < scan.s21.n_elevation(); ++j)
                    for (std::size_t s = 0; s < scan.s21.n_frequency(); ++s)
                        write_row(out, scan.scan_id, scenario_name(scan.scenario), scan.tx_id, scan.rx_id, distance,
                                  grid.azimuth_deg[i], grid.elevation_deg[j], scan.config.band.frequency_hz(s),
                                  scan.s21.at(i, j, s));
        }
        for (const auto &cal : file.calibrations)
        {
            const std::string id = std::string(kCalibrationPrefix) + cal.name;
            for (std::size_t s = 0; s < cal.record.band.n_points; ++s)
                out << id << ",,s_calibration,,,,," << format_shortest(cal.record.band.frequency_hz(s)) << ','
                    << format_shortest(cal.record.s_calibration[s].real()) << ','
                    << format_shortest(cal.record.s_calibration[s].imag()) << '\n';
            for (std::size_t s = 0; s < cal.record.band.n_points; ++s)
                out << id << ",,h_attenuator,,,,," << format_shortest(cal.record.band.frequency_hz(s)) << ','
                    << format_shortest(cal.record.h_attenuator[s].real()) << ','
                    << format_shortest(cal.record.h_attenuator[s].imag()) << '\n';
        }
    }

    void write_sweep_file(const std::filesystem::path &path, const SweepFile &file)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + path.string());
        write_sweep_csv(out, file);
        if (!out)
            throw Error(ErrorCode::IoError, "write failed for " + path.string());
    }

    void write_samples_csv(std::ostream &out, std::span<const PathLossSample> samples)
    {
        out << kSamplesHeader << '\n';
        for (const auto &s : samples)
            out << s.scan_id << ',' << scenario_name(s.scenario) << ',' << format_shortest(s.distance_m) << ','
                << format_shortest(s.frequency_ghz) << ',' << to_string(s.kind) << ',' << format_shortest(s.pl_db) << '\n';
    }

    std::vector<PathLossSample> read_samples_csv(std::istream &in, const std::string &source)
    {
        std::size_t line_no = 0;
        std::string line;
        if (!getline_lf(in, line))
            parse_fail(source, 1, "empty file, header is mandatory");
        ++line_no;
        if (line != kSamplesHeader)
            parse_fail(source, line_no, "unexpected header '" + line + "'");

        std::vector<PathLossSample> out;
        while (getline_lf(in, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const auto f = split(line);
            if (f.size() != 6)
                parse_fail(source, line_no, "expected 6 columns, found " + std::to_string(f.size()));
            PathLossSample s;
            s.scan_id = std::string(f[0]);
            try
            {
                s.scenario = parse_scenario(f[1]);
                s.kind = parse_pl_kind(f[4]);
            }
            catch (const Error &e)
            {
                parse_fail(source, line_no, e.what());
            }
            s.distance_m = parse_double(f[2], source, line_no, "distance_m");
            s.frequency_ghz = parse_double(f[3], source, line_no, "frequency_ghz");
            s.pl_db = parse_double(f[5], source, line_no, "pl_db");
            out.push_back(std::move(s));
        }
        return out;
    }

    std::string dataset_hash(const Dataset &data)
    {
        std::vector<std::string> rows;
        rows.reserve(data.samples.size());
        for (const auto &s : data.samples)
            rows.push_back(format_shortest(s.distance_m) + "|" + format_shortest(s.frequency_ghz) + "|" +
                           format_shortest(s.pl_db) + "|" + to_string(s.kind) + "|" + std::string(scenario_name(s.scenario)));
        std::sort(rows.begin(), rows.end());

        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto &r : rows)
        {
            for (unsigned char c : r)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            h ^= '\n';
            h *= 0x100000001b3ULL;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    std::string fit_report_json(const FitReport &report, const Dataset &data)
    {
        json j;
        j["schema_version"] = 1;
        json params;
        if (const auto *ci = std::get_if<CiModel>(&report.model))
        {
            j["model"] = "ci";
            params["ple"] = number(ci->ple);
            params["frequency_ghz"] = number(ci->frequency_ghz);
        }
        else if (const auto *abg = std::get_if<AbgModel>(&report.model))
        {
            j["model"] = "abg";
            params["alpha"] = number(abg->alpha);
            params["beta_db"] = number(abg->beta_db);
            params["gamma"] = number(abg->gamma);
        }
        else
        {
            const auto &cif = std::get<CifModel>(report.model);
            j["model"] = "cif";
            params["n"] = number(cif.n);
            params["b"] = number(cif.b);
            params["f_avg_ghz"] = number(cif.f_avg_ghz);
        }
        j["parameters"] = std::move(params);

        std::string kind = data.samples.empty() ? "" : to_string(data.samples.front().kind);
        std::string scenario = data.samples.empty() ? "" : std::string(scenario_name(data.samples.front().scenario));
        for (const auto &s : data.samples)
        {
            if (to_string(s.kind) != kind)
                kind = "mixed";
            if (scenario_name(s.scenario) != scenario)
                scenario = "mixed";
        }
        j["kind"] = kind;
        j["scenario"] = scenario;
        j["sigma_sf_db"] = number(report.sigma_sf_db);
        j["r_squared"] = optional_number(report.r_squared);
        j["r_squared_raw"] = optional_number(report.r_squared_raw);
        j["n_samples"] = report.n_samples;
        j["condition_number"] = optional_number(report.condition_number);
        json residuals = json::array();
        for (double r : report.residuals_db)
            residuals.push_back(number(r));
        j["residuals_db"] = std::move(residuals);
        j["provenance"]["dataset_hash"] = dataset_hash(data);
        return j.dump(2) + "\n";
    }

    std::string read_text_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_text_file(const std::filesystem::path &path, std::string_view text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError, "cannot write " + path.string());
        out << text;
        if (!out)
            throw Error(ErrorCode::IoError, "write failed for " + path.string());
    }
}
