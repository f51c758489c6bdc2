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

#include "thzpl/fitting.hpp"
#include "thzpl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace thzpl;
using Catch::Matchers::WithinAbs;

namespace
{
    PathLossSample sample(double d, double f, double pl)
    {
        return PathLossSample{d, f, pl, PlKind::best(), Scenario::OfficeArea, ""};
    }

    std::vector<double> distances(double first, double last, int n)
    {
        std::vector<double> d;
        for (int k = 0; k < n; ++k)
            d.push_back(first + (last - first) * k / (n - 1));
        return d;
    }

    Dataset noiseless(const PathLossModel &m, const std::vector<double> &freqs)
    {
        return synthesize_campaign(m, {distances(1.0, 20.0, 15), freqs, Scenario::OfficeArea, PlKind::best()}, 1);
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

    // Exponent minimising the RMS residual on a uniform grid over [0, 6]
    double brute_force_ple(const Dataset &data, double f_ghz)
    {
        const double anchor = 20.0 * std::log10(4.0 * 3.14159265358979323846 * f_ghz * 1e9 / 299792458.0);
        double best = 0.0, best_cost = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 60000; ++k)
        {
            const double ple = k * 1e-4;
            double cost = 0.0;
            for (const auto &s : data.samples)
            {
                const double r = s.pl_db - anchor - 10.0 * ple * std::log10(s.distance_m);
                cost += r * r;
            }
            if (cost < best_cost)
            {
                best_cost = cost;
                best = ple;
            }
        }
        return best;
    }
}

TEST_CASE("CI fit recovers noiseless data", "[fitting]")
{
    const CiModel truth{2.0, std::nullopt, 140.0, PlKind::best(), Scenario::MeetingRoom};
    const auto data = noiseless(truth, {});
    const auto r = fit_ci(data, 140.0);
    const auto &m = std::get<CiModel>(r.model);
    CHECK_THAT(m.ple, WithinAbs(2.0, 1e-9));
    CHECK_THAT(r.sigma_sf_db, WithinAbs(0.0, 1e-9));
    CHECK(m.sigma_sf_db == r.sigma_sf_db);
    CHECK(m.frequency_ghz == 140.0);
    CHECK(m.kind == PlKind::best());
    CHECK(r.n_samples == 15);
    CHECK_THAT(*r.r_squared, WithinAbs(1.0, 1e-9));
    CHECK_FALSE(r.condition_number.has_value());
}

TEST_CASE("CI fit of two exponents at the same distances is their midpoint", "[fitting]")
{
    const double anchor = fspl_db(140.0, 1.0);
    Dataset data;
    for (double d : {2.0, 5.0, 12.0})
    {
        data.samples.push_back(sample(d, 140.0, anchor + 15.0 * std::log10(d)));
        data.samples.push_back(sample(d, 140.0, anchor + 25.0 * std::log10(d)));
    }
    CHECK_THAT(std::get<CiModel>(fit_ci(data, 140.0).model).ple, WithinAbs(2.0, 1e-12));
}

TEST_CASE("CI fit with shadow fading", "[fitting]")
{
    const CiModel truth{1.94, 2.80, 140.0, PlKind::best(), Scenario::MeetingRoom};
    const auto data = synthesize_campaign(truth, {distances(1.5, 20.0, 1000), {}, Scenario::MeetingRoom, PlKind::best()}, 20240611);
    const auto r = fit_ci(data, 140.0);
    CHECK_THAT(std::get<CiModel>(r.model).ple, WithinAbs(1.94, 0.1));
    CHECK_THAT(r.sigma_sf_db, WithinAbs(2.80, 0.3));
}

TEST_CASE("Closed-form CI exponent agrees with a brute-force search", "[fitting][oracle]")
{
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> d(1.0, 30.0), ple(1.0, 4.0), noise(-6.0, 6.0);
    std::uniform_int_distribution<int> n(3, 50);
    for (int trial = 0; trial < 6; ++trial)
    {
        const double p = ple(rng);
        Dataset data;
        const int count = n(rng);
        for (int k = 0; k < count; ++k)
        {
            const double dk = d(rng);
            data.samples.push_back(sample(dk, 140.0, fspl_db(140.0, 1.0) + 10.0 * p * std::log10(dk) + noise(rng)));
        }
        const double closed = std::get<CiModel>(fit_ci(data, 140.0).model).ple;
        REQUIRE_THAT(closed, WithinAbs(brute_force_ple(data, 140.0), 1e-3));
    }
}

TEST_CASE("ABG fit recovers noiseless data", "[fitting]")
{
    const AbgModel truth{2.21, 21.65, 2.41, 0.0, std::nullopt};
    const auto r = fit_abg(noiseless(truth, {140.0, 220.0}));
    const auto &m = std::get<AbgModel>(r.model);
    CHECK_THAT(m.alpha, WithinAbs(2.21, 1e-9));
    CHECK_THAT(m.beta_db, WithinAbs(21.65, 1e-9));
    CHECK_THAT(m.gamma, WithinAbs(2.41, 1e-9));
    CHECK_THAT(r.sigma_sf_db, WithinAbs(0.0, 1e-9));
    CHECK_THAT(*r.r_squared, WithinAbs(1.0, 1e-9));
    CHECK(m.r_squared == r.r_squared);
    REQUIRE(r.condition_number.has_value());
    CHECK(*r.condition_number < kMaxConditionNumber);
}

TEST_CASE("ABG reproduces two-band CI data", "[fitting]")
{
    Dataset data;
    for (double f : {140.0, 220.0})
        for (double d : distances(1.0, 20.0, 12))
            data.samples.push_back(sample(d, f, fspl_db(f, 1.0) + 20.0 * std::log10(d)));
    const auto r = fit_abg(data);
    for (double res : r.residuals_db)
        REQUIRE(std::abs(res) <= 1e-6);
    CHECK_THAT(*r.r_squared, WithinAbs(1.0, 1e-9));
}

TEST_CASE("CIF fit recovers noiseless data", "[fitting]")
{
    SECTION("published pair")
    {
        const CifModel truth{2.13, 0.044, 180.0, 0.0, std::nullopt};
        const auto r = fit_cif(noiseless(truth, {140.0, 220.0}));
        const auto &m = std::get<CifModel>(r.model);
        CHECK_THAT(m.n, WithinAbs(2.13, 1e-9));
        CHECK_THAT(m.b, WithinAbs(0.044, 1e-9));
        CHECK(m.f_avg_ghz == 180.0);
        CHECK_THAT(r.sigma_sf_db, WithinAbs(0.0, 1e-9));
    }
    SECTION("flat frequency slope")
    {
        const CifModel truth{1.7, 0.0, 180.0, 0.0, std::nullopt};
        const auto m = std::get<CifModel>(fit_cif(noiseless(truth, {140.0, 220.0})).model);
        CHECK_THAT(m.b, WithinAbs(0.0, 1e-9));
        CHECK_THAT(m.n, WithinAbs(1.7, 1e-9));
    }
    SECTION("reference frequency follows the sample counts")
    {
        // generated about 184 GHz, refit with unequal counts so that the internal average moves
        const CifModel truth{2.0, 0.12, 184.14, 0.0, std::nullopt};
        Dataset data;
        for (double d : distances(1.0, 20.0, 10))
            data.samples.push_back(sample(d, 140.0, cif_predict(truth, d, 140.0)));
        for (double d : distances(1.0, 20.0, 30))
            data.samples.push_back(sample(d, 220.0, cif_predict(truth, d, 220.0)));
        const auto r = fit_cif(data);
        const auto &m = std::get<CifModel>(r.model);
        CHECK(m.f_avg_ghz == 200.0);
        for (double res : r.residuals_db)
            REQUIRE(std::abs(res) <= 1e-9);
    }
}

TEST_CASE("Refitting a model on its own predictions is a fixed point", "[fitting][property]")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 3.5), b(-0.3, 0.3), beta(0.0, 40.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CiModel ci{u(rng), std::nullopt, 205.0, PlKind::best(), Scenario::Hallway};
        REQUIRE_THAT(std::get<CiModel>(fit_ci(noiseless(ci, {}), 205.0).model).ple, WithinAbs(ci.ple, 1e-9));

        const AbgModel abg{u(rng), beta(rng), u(rng), 0.0, std::nullopt};
        const auto ma = std::get<AbgModel>(fit_abg(noiseless(abg, {136.5, 205.0})).model);
        REQUIRE_THAT(ma.alpha, WithinAbs(abg.alpha, 1e-9));
        REQUIRE_THAT(ma.beta_db, WithinAbs(abg.beta_db, 1e-9));
        REQUIRE_THAT(ma.gamma, WithinAbs(abg.gamma, 1e-9));

        const CifModel cif{u(rng), b(rng), 170.75, 0.0, std::nullopt};
        const auto mc = std::get<CifModel>(fit_cif(noiseless(cif, {136.5, 205.0})).model);
        REQUIRE_THAT(mc.n, WithinAbs(cif.n, 1e-9));
        REQUIRE_THAT(mc.b, WithinAbs(cif.b, 1e-9));
    }
}

TEST_CASE("Fits do not depend on sample order or duplication", "[fitting][property]")
{
    const AbgModel truth{2.17, 28.31, 2.17, 1.74, std::nullopt};
    auto data = synthesize_campaign(truth, {distances(2.0, 25.0, 20), {140.0, 220.0}, Scenario::OfficeArea, PlKind::best()}, 77);
    const auto ci_data = Dataset{{data.samples.begin(), data.samples.begin() + 20}};

    const auto abg = fit_abg(data);
    const auto cif = fit_cif(data);
    const auto ci = fit_ci(ci_data, 140.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial)
    {
        auto shuffled = data;
        std::shuffle(shuffled.samples.begin(), shuffled.samples.end(), rng);
        auto shuffled_ci = ci_data;
        std::shuffle(shuffled_ci.samples.begin(), shuffled_ci.samples.end(), rng);
        REQUIRE(fit_abg(shuffled).sigma_sf_db == abg.sigma_sf_db);
        REQUIRE(fit_cif(shuffled).sigma_sf_db == cif.sigma_sf_db);
        REQUIRE(fit_ci(shuffled_ci, 140.0).sigma_sf_db == ci.sigma_sf_db);
        REQUIRE(std::get<AbgModel>(fit_abg(shuffled).model).alpha == std::get<AbgModel>(abg.model).alpha);
    }

    auto doubled = data;
    doubled.samples.insert(doubled.samples.end(), data.samples.begin(), data.samples.end());
    const auto a2 = std::get<AbgModel>(fit_abg(doubled).model);
    const auto &a1 = std::get<AbgModel>(abg.model);
    CHECK_THAT(a2.alpha, WithinAbs(a1.alpha, 1e-9));
    CHECK_THAT(a2.beta_db, WithinAbs(a1.beta_db, 1e-9));
    CHECK_THAT(a2.gamma, WithinAbs(a1.gamma, 1e-9));
    const auto c2 = std::get<CifModel>(fit_cif(doubled).model);
    CHECK_THAT(c2.n, WithinAbs(std::get<CifModel>(cif.model).n, 1e-9));
    CHECK_THAT(c2.b, WithinAbs(std::get<CifModel>(cif.model).b, 1e-9));
    auto ci_doubled = ci_data;
    ci_doubled.samples.insert(ci_doubled.samples.end(), ci_data.samples.begin(), ci_data.samples.end());
    CHECK_THAT(std::get<CiModel>(fit_ci(ci_doubled, 140.0).model).ple, WithinAbs(std::get<CiModel>(ci.model).ple, 1e-12));
}

TEST_CASE("Residuals keep the input order", "[fitting]")
{
    Dataset data;
    data.samples = {sample(10.0, 140.0, 100.0), sample(2.0, 140.0, 80.0), sample(5.0, 140.0, 90.0)};
    const auto r = fit_ci(data, 140.0);
    REQUIRE(r.observed_db == std::vector<double>{100.0, 80.0, 90.0});
    const auto &m = std::get<CiModel>(r.model);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK_THAT(r.residuals_db[k], WithinAbs(data.samples[k].pl_db - ci_predict(m, data.samples[k].distance_m), 1e-12));
}

TEST_CASE("Goodness of fit", "[fitting]")
{
    const std::vector<double> y{1.0, 2.0, 4.0, 7.0};
    CHECK(goodness_of_fit(y, std::vector<double>(4, 0.0)) == 1.0);
    const std::vector<double> centered{-2.5, -1.5, 0.5, 3.5};
    CHECK(goodness_of_fit(y, centered) == 0.0);
    CHECK(code_of([] { goodness_of_fit(std::vector<double>{3.0, 3.0}, std::vector<double>{0.0, 0.0}); }) == ErrorCode::ZeroVariance);
    CHECK(code_of([] { goodness_of_fit(std::vector<double>{3.0}, std::vector<double>{0.0}); }) == ErrorCode::ZeroVariance);

    // a poor fit reports its raw negative value next to the clamped one
    Dataset data;
    data.samples = {sample(2.0, 140.0, 120.0), sample(4.0, 140.0, 80.0), sample(8.0, 140.0, 100.0)};
    const auto r = fit_ci(data, 140.0);
    CHECK(*r.r_squared_raw < 0.0);
    CHECK(*r.r_squared == 0.0);
    CHECK(goodness_of_fit(r) == *r.r_squared_raw);
}

TEST_CASE("Goodness of fit on noisy office-like data", "[fitting]")
{
    const AbgModel truth{2.17, 28.31, 2.17, 2.80, std::nullopt};
    const auto data =
        synthesize_campaign(truth, {distances(1.5, 25.0, 37), {140.0, 220.0}, Scenario::OfficeArea, PlKind::best()}, 2021);
    const auto r = fit_abg(data);
    CHECK(*r.r_squared >= 0.75);
    CHECK(*r.r_squared <= 0.95);
}

TEST_CASE("Fit error paths", "[fitting]")
{
    const double anchor = fspl_db(140.0, 1.0);
    CHECK(code_of([] { fit_ci(Dataset{}, 140.0); }) == ErrorCode::EmptyDataset);
    CHECK(code_of([] { fit_abg(Dataset{}); }) == ErrorCode::EmptyDataset);
    CHECK(code_of([&] { fit_ci(Dataset{{sample(0.5, 140.0, anchor)}}, 140.0); }) == ErrorCode::DomainError);
    CHECK(code_of([&] { fit_ci(Dataset{{sample(2.0, 140.0, std::nan(""))}}, 140.0); }) == ErrorCode::DomainError);
    CHECK(code_of([&] { fit_ci(Dataset{{sample(2.0, 140.0, 80.0), sample(3.0, 220.0, 90.0)}}, 140.0); }) ==
          ErrorCode::MixedFrequency);
    CHECK(code_of([&] { fit_ci(Dataset{{sample(1.0, 140.0, 80.0), sample(1.0, 140.0, 70.0)}}, 140.0); }) ==
          ErrorCode::DegenerateGeometry);

    Dataset single;
    for (double d : {2.0, 4.0, 8.0})
        single.samples.push_back(sample(d, 140.0, anchor + 20.0 * std::log10(d)));
    CHECK(code_of([&] { fit_abg(single); }) == ErrorCode::RankDeficient);
    CHECK(code_of([&] { fit_cif(single); }) == ErrorCode::RankDeficient);

    auto lonely = single;
    lonely.samples.push_back(sample(3.0, 220.0, 90.0));
    CHECK(code_of([&] { fit_abg(lonely); }) == ErrorCode::RankDeficient);

    // distance tied to band: the distance and frequency columns are collinear
    Dataset tied;
    tied.samples = {sample(2.0, 140.0, 80.0), sample(2.0, 140.0, 81.0), sample(5.0, 220.0, 95.0), sample(5.0, 220.0, 96.0)};
    CHECK(code_of([&] { fit_abg(tied); }) == ErrorCode::RankDeficient);

    // path loss exactly at the 1 m free-space value: the exponent vanishes and b is undefined
    Dataset flat;
    for (double f : {140.0, 220.0})
        for (double d : {2.0, 5.0, 9.0})
            flat.samples.push_back(sample(d, f, fspl_db(f, 1.0)));
    CHECK(code_of([&] { fit_cif(flat); }) == ErrorCode::UnstableSlope);
}
