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

#include "catch_amalgamated.hpp"
#include "test_helpers.hpp"

#include "thzpl/extraction.hpp"
#include "thzpl/models.hpp"
#include "thzpl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

using namespace thzpl;
using Catch::Matchers::WithinAbs;

namespace
{
    BeamTable table_of(std::vector<double> magnitudes)
    {
        BeamTable t;
        for (std::size_t k = 0; k < magnitudes.size(); ++k)
            t.entries.push_back({10.0 * static_cast<double>(k), 0.0, magnitudes[k]});
        sort_beams(t.entries);
        t.distance_m = 2.0;
        t.frequency_ghz = 140.0;
        return t;
    }

    ErrorCode code_of(const std::function<void()> &fn)
    {
        try
        {
            fn();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        FAIL("no error raised");
        return ErrorCode::IoError;
    }
}

TEST_CASE("Beam averaging", "[extraction]")
{
    const auto cfg = test::small_config();

    SECTION("one lit direction")
    {
        auto scan = test::flat_scan(cfg, 2.0);
        for (std::size_t s = 0; s < cfg.band.n_points; ++s)
            scan.s21.at(2, 1, s) = std::polar(0.01, 0.3 * static_cast<double>(s));
        const auto t = beam_average(scan);
        REQUIRE(t.entries.size() == cfg.grid.size());
        CHECK_THAT(t.entries[0].avg_magnitude, WithinAbs(0.01, 1e-15));
        CHECK(t.entries[0].azimuth_deg == 20.0);
        CHECK(t.entries[0].elevation_deg == 0.0);
        for (std::size_t k = 1; k < t.entries.size(); ++k)
            CHECK(t.entries[k].avg_magnitude == 0.0);
    }
    SECTION("ordering of two directions")
    {
        auto scan = test::flat_scan(cfg, 2.0);
        for (std::size_t s = 0; s < cfg.band.n_points; ++s)
        {
            scan.s21.at(0, 0, s) = {0.0, 0.01};
            scan.s21.at(3, 2, s) = {0.02, 0.0};
        }
        const auto t = beam_average(scan);
        CHECK(t.entries[0].azimuth_deg == 30.0);
        CHECK(t.entries[0].avg_magnitude == 0.02);
        CHECK(t.entries[1].azimuth_deg == 0.0);
        CHECK(t.entries[1].avg_magnitude == 0.01);
    }
    SECTION("alternating two-tap magnitudes")
    {
        auto c = cfg;
        c.band = FrequencyBand::make(130e9, 130.03e9, 4, "140GHz");
        auto scan = test::flat_scan(c, 2.0);
        const double mags[4] = {0.01, 0.03, 0.01, 0.03};
        for (std::size_t s = 0; s < 4; ++s)
            scan.s21.at(1, 1, s) = std::polar(mags[s], 1.0 + static_cast<double>(s));
        CHECK_THAT(beam_average(scan).entries[0].avg_magnitude, WithinAbs(0.02, 1e-15));
    }
    SECTION("ties are ordered by azimuth then elevation")
    {
        const auto t = beam_average(test::flat_scan(cfg, 2.0, {0.0, 0.005}));
        for (std::size_t k = 0; k + 1 < t.entries.size(); ++k)
        {
            const auto &a = t.entries[k], &b = t.entries[k + 1];
            CHECK((a.azimuth_deg < b.azimuth_deg || (a.azimuth_deg == b.azimuth_deg && a.elevation_deg < b.elevation_deg)));
        }
    }
    SECTION("context is carried over")
    {
        auto scan = test::flat_scan(cfg, 7.5, {0.001, 0.0});
        scan.scenario = Scenario::Hallway;
        ExtractionOptions opts;
        opts.frequency_mode = FrequencyMode::Center;
        const auto t = beam_average(scan, opts);
        CHECK(t.distance_m == 7.5);
        CHECK(t.scenario == Scenario::Hallway);
        CHECK(t.scan_id == "S1");
        CHECK(t.frequency_ghz == cfg.band.center_hz() / 1e9);
    }
    SECTION("invalid scans are rejected")
    {
        auto scan = test::flat_scan(cfg, 2.0, {0.001, 0.0});
        scan.s21.at(0, 0, 0) = {std::nan(""), 0.0};
        CHECK_THROWS_AS(beam_average(scan), ValidationError);
    }
}

TEST_CASE("Noise gate zeroes directions below the floor", "[extraction]")
{
    const auto cfg = test::small_config();
    const double floor = cfg.noise_floor_amplitude();
    auto scan = test::flat_scan(cfg, 2.0, {0.5 * floor, 0.0});
    for (std::size_t s = 0; s < cfg.band.n_points; ++s)
        scan.s21.at(1, 0, s) = {1e-4, 0.0};

    const auto open = beam_average(scan);
    CHECK(open.entries.back().avg_magnitude == 0.5 * floor);

    ExtractionOptions gated;
    gated.noise_gate = true;
    const auto t = beam_average(scan, gated);
    CHECK_THAT(t.entries[0].avg_magnitude, WithinAbs(1e-4, 1e-18));
    for (std::size_t k = 1; k < t.entries.size(); ++k)
        CHECK(t.entries[k].avg_magnitude == 0.0);
    CHECK(omni_pl(t).pl_db == best_direction_pl(t).pl_db);
    CHECK(omni_pl(open).pl_db < omni_pl(t).pl_db);
}

TEST_CASE("Best-direction path loss", "[extraction]")
{
    CHECK_THAT(best_direction_pl(table_of({0.001, 1e-5})).pl_db, WithinAbs(60.0, 1e-12));
    CHECK(best_direction_pl(table_of({1.0})).pl_db == 0.0);
    const auto s = best_direction_pl(table_of({0.5}));
    CHECK(s.kind == PlKind::best());
    CHECK(s.distance_m == 2.0);
    CHECK(code_of([] { best_direction_pl(table_of({0.0, 0.0})); }) == ErrorCode::ZeroSignal);
}

TEST_CASE("Free-space scan reproduces FSPL", "[extraction]")
{
    auto cfg = sounder_140ghz();
    cfg.tx_gain_dbi = 0.0;
    cfg.rx_gain_dbi = 0.0;
    const auto env = free_space_environment(1.0, 140.0, 120.0, 0.0, Scenario::MeetingRoom, 3);
    const auto scan = synthesize_scan(env, cfg, {"FS", "TX", "RX", 1.0}, false);
    const double pl = best_direction_pl(beam_average(scan)).pl_db;
    CHECK_THAT(pl, WithinAbs(75.37, 0.05));
    CHECK_THAT(pl, WithinAbs(fspl_db(140.0, 1.0), 1e-9));
}

TEST_CASE("Omni path loss", "[extraction]")
{
    CHECK(omni_pl(table_of({0.02, 0.0, 0.0})).pl_db == best_direction_pl(table_of({0.02, 0.0, 0.0})).pl_db);
    const auto two = table_of({0.004, 0.004});
    CHECK_THAT(best_direction_pl(two).pl_db - omni_pl(two).pl_db, WithinAbs(10.0 * std::log10(2.0), 1e-12));
    CHECK_THAT(10.0 * std::log10(2.0), WithinAbs(3.01, 0.005));
    CHECK(omni_pl(two).kind == PlKind::omni());
    CHECK(code_of([] { omni_pl(table_of({0.0})); }) == ErrorCode::ZeroSignal);
}

TEST_CASE("Omni path loss of a five-path environment", "[extraction]")
{
    // narrow receive beams so that each path is seen by its own direction only
    auto cfg = sounder_140ghz();
    cfg.rx_hpbw_deg = 5.0;
    const double gains[5] = {3e-4, 2e-4, 1.5e-4, 1e-4, 5e-5};
    const double az[5] = {0.0, 60.0, 130.0, 200.0, 290.0};
    const double el[5] = {0.0, 10.0, -20.0, 20.0, 0.0};
    VirtualEnvironment env;
    double power = 0.0;
    for (int k = 0; k < 5; ++k)
    {
        env.mpcs.push_back({gains[k], (3.0 + k) / kSpeedOfLight, az[k], el[k]});
        power += gains[k] * gains[k];
    }
    const auto t = beam_average(synthesize_scan(env, cfg, {"P5", "TX", "RX", 3.0}, false));
    CHECK_THAT(omni_pl(t).pl_db, WithinAbs(-10.0 * std::log10(power), 0.1));
    CHECK_THAT(combine_noncoherent(t, 5).pl_db, WithinAbs(-10.0 * std::log10(power), 0.01));
}

TEST_CASE("Coherent combination", "[extraction]")
{
    const auto t = table_of({0.01, 0.03, 0.0});
    CHECK(combine_coherent(t, 1).pl_db == best_direction_pl(t).pl_db);
    CHECK_THAT(combine_coherent(t, 2).pl_db, WithinAbs(-20.0 * std::log10(0.04), 1e-12));
    CHECK_THAT(combine_coherent(t, 2).pl_db, WithinAbs(27.96, 0.005));
    const auto eq = table_of({0.002, 0.002});
    CHECK_THAT(best_direction_pl(eq).pl_db - combine_coherent(eq, 2).pl_db, WithinAbs(20.0 * std::log10(2.0), 1e-12));
    CHECK(combine_coherent(t, 3).kind == PlKind::coherent(3));
    CHECK(code_of([&] { combine_coherent(t, 0); }) == ErrorCode::InvalidBeamCount);
    CHECK(code_of([&] { combine_coherent(t, 4); }) == ErrorCode::InvalidBeamCount);
}

TEST_CASE("Non-coherent combination", "[extraction]")
{
    const auto t = table_of({0.01, 0.03, 0.002, 0.0});
    CHECK(combine_noncoherent(t, 1).pl_db == best_direction_pl(t).pl_db);
    CHECK(combine_noncoherent(t, 4).pl_db == omni_pl(t).pl_db);
    CHECK_THAT(combine_noncoherent(table_of({0.03, 0.01}), 2).pl_db, WithinAbs(30.0, 1e-12));
    CHECK(code_of([&] { combine_noncoherent(t, 5); }) == ErrorCode::InvalidBeamCount);
    CHECK(code_of([] { combine_noncoherent(table_of({0.0, 0.0}), 2); }) == ErrorCode::ZeroSignal);
}

TEST_CASE("Combination ordering and monotonicity on random tables", "[extraction][property]")
{
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 300; ++trial)
    {
        const auto t = test::random_table(rng, 1 + trial % 180, 0.3);
        const double best = best_direction_pl(t).pl_db;
        const int n_all = static_cast<int>(t.entries.size());
        double prev_c = best, prev_nc = best;
        for (int n = 1; n <= n_all; ++n)
        {
            const double c = combine_coherent(t, n).pl_db;
            const double nc = combine_noncoherent(t, n).pl_db;
            REQUIRE(c <= nc);
            REQUIRE(nc <= best);
            REQUIRE(c <= prev_c);
            REQUIRE(nc <= prev_nc);
            int nonzero = 0;
            for (int k = 0; k < n; ++k)
                nonzero += t.entries[static_cast<std::size_t>(k)].avg_magnitude > 0.0;
            if (nonzero <= 1)
                REQUIRE(c == nc);
            else
                REQUIRE(c < nc);
            prev_c = c;
            prev_nc = nc;
        }
        REQUIRE(combine_coherent(t, 1).pl_db == best);
        REQUIRE(combine_noncoherent(t, n_all).pl_db == omni_pl(t).pl_db);
    }
}

TEST_CASE("Direction permutations do not change extracted path loss", "[extraction][property]")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    const auto cfg = test::small_config();
    auto scan = test::flat_scan(cfg, 4.0);
    for (auto &h : scan.s21.values())
        h = {u(rng), u(rng)};

    const auto reference = extract_all(beam_average(scan), 12);
    const std::size_t n_dir = cfg.grid.size();
    std::vector<std::size_t> perm(n_dir);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto shuffled = scan;
        const std::size_t n_el = cfg.grid.n_elevation();
        for (std::size_t d = 0; d < n_dir; ++d)
        {
            const std::size_t src = perm[d];
            for (std::size_t s = 0; s < cfg.band.n_points; ++s)
                shuffled.s21.at(d / n_el, d % n_el, s) = scan.s21.at(src / n_el, src % n_el, s);
        }
        const auto got = extract_all(beam_average(shuffled), 12);
        REQUIRE(got.size() == reference.size());
        for (std::size_t k = 0; k < got.size(); ++k)
        {
            REQUIRE(got[k].kind == reference[k].kind);
            REQUIRE(got[k].pl_db == reference[k].pl_db);
        }
    }
}

TEST_CASE("extract_all emits every kind", "[extraction]")
{
    const auto t = table_of({0.01, 0.005, 0.001});
    const auto all = extract_all(t, 5);
    REQUIRE(all.size() == 2 + 3 + 3);
    CHECK(all[0].kind == PlKind::best());
    CHECK(all[1].kind == PlKind::omni());
    CHECK(all[2].kind == PlKind::coherent(1));
    CHECK(all[4].kind == PlKind::coherent(3));
    CHECK(all[5].kind == PlKind::noncoherent(1));
    CHECK(all[7].kind == PlKind::noncoherent(3));
}
