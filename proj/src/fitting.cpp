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

#include "thzpl/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace thzpl
{
    namespace
    {
        void check_dataset(const Dataset &data)
        {
            if (data.samples.empty())
                throw Error(ErrorCode::EmptyDataset, "dataset has no samples");
            for (const auto &s : data.samples)
            {
                if (!std::isfinite(s.pl_db) || !std::isfinite(s.distance_m) || !std::isfinite(s.frequency_ghz))
                    throw Error(ErrorCode::DomainError, "dataset contains a non-finite sample");
                if (s.distance_m < kReferenceDistanceM)
                {
                    std::ostringstream msg;
                    msg << "sample distance " << s.distance_m << " m is below the 1 m reference distance";
                    throw Error(ErrorCode::DomainError, msg.str());
                }
                if (!(s.frequency_ghz > 0.0))
                    throw Error(ErrorCode::DomainError, "sample frequency must be positive");
            }
        }

        // Sums run in this order so that fitted values do not depend on input order
        std::vector<std::size_t> canonical_order(const Dataset &data)
        {
            std::vector<std::size_t> idx(data.samples.size());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                      {
                          const auto &x = data.samples[a];
                          const auto &y = data.samples[b];
                          if (x.distance_m != y.distance_m)
                              return x.distance_m < y.distance_m;
                          if (x.frequency_ghz != y.frequency_ghz)
                              return x.frequency_ghz < y.frequency_ghz;
                          return x.pl_db < y.pl_db; });
            return idx;
        }

        double log_distance(double d_m) { return 10.0 * std::log10(d_m / kReferenceDistanceM); }

        void check_multiband(const Dataset &data, std::size_t n_params)
        {
            const auto counts = data.frequency_counts();
            if (counts.size() < 2)
                throw Error(ErrorCode::RankDeficient,
                            "multi-band fit needs at least two frequencies; the frequency term is unidentifiable");
            for (const auto &c : counts)
                if (c.count < 2)
                {
                    std::ostringstream msg;
                    msg << "frequency " << c.frequency_ghz << " GHz has only " << c.count << " sample";
                    throw Error(ErrorCode::RankDeficient, msg.str());
                }
            if (data.samples.size() < n_params)
                throw Error(ErrorCode::RankDeficient, "fewer samples than model parameters");
        }

        struct LeastSquares
        {
            Eigen::VectorXd theta;
            double condition_number;
        };

        LeastSquares solve(const Eigen::MatrixXd &x, const Eigen::VectorXd &y)
        {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto &sv = svd.singularValues();
            const double smax = sv(0);
            const double smin = sv(sv.size() - 1);
            const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
            if (!(cond <= kMaxConditionNumber))
            {
                std::ostringstream msg;
                msg << "design matrix is rank deficient (condition number " << cond << ")";
                throw Error(ErrorCode::RankDeficient, msg.str());
            }
            return {svd.solve(y), cond};
        }

        void finish(FitReport &report, const Dataset &data, const std::vector<double> &predicted)
        {
            report.n_samples = data.samples.size();
            report.observed_db.resize(report.n_samples);
            report.residuals_db.resize(report.n_samples);
            for (std::size_t k = 0; k < report.n_samples; ++k)
            {
                report.observed_db[k] = data.samples[k].pl_db;
                report.residuals_db[k] = data.samples[k].pl_db - predicted[k];
            }
            // canonical order for sigma and R^2 as well
            const auto order = canonical_order(data);
            std::vector<double> obs(order.size()), res(order.size());
            for (std::size_t k = 0; k < order.size(); ++k)
            {
                obs[k] = report.observed_db[order[k]];
                res[k] = report.residuals_db[order[k]];
            }
            report.sigma_sf_db = rms(res);
            try
            {
                const double r2 = goodness_of_fit(obs, res);
                report.r_squared_raw = r2;
                report.r_squared = std::clamp(r2, 0.0, 1.0);
            }
            catch (const Error &e)
            {
                if (e.code() != ErrorCode::ZeroVariance)
                    throw;
            }
        }
    }

    std::vector<FrequencyCount> Dataset::frequency_counts() const
    {
        std::map<double, std::size_t> counts;
        for (const auto &s : samples)
            ++counts[s.frequency_ghz];
        std::vector<FrequencyCount> out;
        for (const auto &[f, n] : counts)
            out.push_back({f, n});
        return out;
    }

    double rms(std::span<const double> values)
    {
        if (values.empty())
            return 0.0;
        double sum = 0.0;
        for (double v : values)
            sum += v * v;
        return std::sqrt(sum / static_cast<double>(values.size()));
    }

    double goodness_of_fit(std::span<const double> observed_db, std::span<const double> residuals_db)
    {
        if (observed_db.size() != residuals_db.size())
            throw Error(ErrorCode::DimensionMismatch, "observed and residual vectors differ in length");
        if (observed_db.size() < 2)
            throw Error(ErrorCode::ZeroVariance, "R^2 needs at least two samples");
        const double mean = std::accumulate(observed_db.begin(), observed_db.end(), 0.0) /
                            static_cast<double>(observed_db.size());
        double ss_tot = 0.0;
        double ss_res = 0.0;
        for (std::size_t k = 0; k < observed_db.size(); ++k)
        {
            ss_tot += (observed_db[k] - mean) * (observed_db[k] - mean);
            ss_res += residuals_db[k] * residuals_db[k];
        }
        if (!(ss_tot > 0.0))
            throw Error(ErrorCode::ZeroVariance, "observed path loss has zero variance");
        return 1.0 - ss_res / ss_tot;
    }

    double goodness_of_fit(const FitReport &report)
    {
        return goodness_of_fit(report.observed_db, report.residuals_db);
    }

    FitReport fit_ci(const Dataset &data, double f_ghz)
    {
        check_dataset(data);
        if (!(f_ghz > 0.0) || !std::isfinite(f_ghz))
            throw Error(ErrorCode::DomainError, "fit frequency must be positive");
        for (const auto &s : data.samples)
            if (std::abs(s.frequency_ghz - f_ghz) > 1e-9 * f_ghz)
            {
                std::ostringstream msg;
                msg << "sample at " << s.frequency_ghz << " GHz in a single-frequency fit at " << f_ghz << " GHz";
                throw Error(ErrorCode::MixedFrequency, msg.str());
            }

        const double anchor = fspl_db(f_ghz, kReferenceDistanceM);
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t k : canonical_order(data))
        {
            const double x = log_distance(data.samples[k].distance_m);
            const double y = data.samples[k].pl_db - anchor;
            sxy += x * y;
            sxx += x * x;
        }
        if (!(sxx > 0.0))
            throw Error(ErrorCode::DegenerateGeometry, "every sample sits at the reference distance");

        CiModel model;
        model.ple = sxy / sxx;
        model.frequency_ghz = f_ghz;
        model.kind = data.samples.front().kind;
        model.scenario = data.samples.front().scenario;

        std::vector<double> predicted;
        predicted.reserve(data.samples.size());
        for (const auto &s : data.samples)
            predicted.push_back(ci_predict(model, s.distance_m));

        FitReport report;
        finish(report, data, predicted);
        model.sigma_sf_db = report.sigma_sf_db;
        report.model = model;
        return report;
    }

    FitReport fit_abg(const Dataset &data)
    {
        check_dataset(data);
        check_multiband(data, 3);

        const auto order = canonical_order(data);
        const auto rows = static_cast<Eigen::Index>(order.size());
        Eigen::MatrixXd x(rows, 3);
        Eigen::VectorXd y(rows);
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const auto &s = data.samples[order[static_cast<std::size_t>(r)]];
            x(r, 0) = log_distance(s.distance_m);
            x(r, 1) = 1.0;
            x(r, 2) = 10.0 * std::log10(s.frequency_ghz / kReferenceFrequencyGhz);
            y(r) = s.pl_db;
        }
        const auto ls = solve(x, y);

        AbgModel model{ls.theta(0), ls.theta(1), ls.theta(2), 0.0, std::nullopt};
        std::vector<double> predicted;
        for (const auto &s : data.samples)
            predicted.push_back(abg_predict(model, s.distance_m, s.frequency_ghz));

        FitReport report;
        finish(report, data, predicted);
        report.condition_number = ls.condition_number;
        model.sigma_sf_db = report.sigma_sf_db;
        model.r_squared = report.r_squared;
        report.model = model;
        return report;
    }

    FitReport fit_cif(const Dataset &data)
    {
        check_dataset(data);
        check_multiband(data, 2);

        const auto counts = data.frequency_counts();
        const double f_avg = weighted_avg_frequency(counts);

        const auto order = canonical_order(data);
        const auto rows = static_cast<Eigen::Index>(order.size());
        Eigen::MatrixXd x(rows, 2);
        Eigen::VectorXd y(rows);
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const auto &s = data.samples[order[static_cast<std::size_t>(r)]];
            const double ld = log_distance(s.distance_m);
            x(r, 0) = ld;
            x(r, 1) = (s.frequency_ghz - f_avg) / f_avg * ld;
            y(r) = s.pl_db - fspl_db(s.frequency_ghz, kReferenceDistanceM);
        }
        const auto ls = solve(x, y);
        const double u = ls.theta(0);
        const double v = ls.theta(1);
        if (std::abs(u) < 1e-6)
            throw Error(ErrorCode::UnstableSlope, "fitted exponent is ~0, frequency slope b is undefined");

        CifModel model{u, v / u, f_avg, 0.0, std::nullopt};
        std::vector<double> predicted;
        for (const auto &s : data.samples)
            predicted.push_back(cif_predict(model, s.distance_m, s.frequency_ghz));

        FitReport report;
        finish(report, data, predicted);
        report.condition_number = ls.condition_number;
        model.sigma_sf_db = report.sigma_sf_db;
        model.r_squared = report.r_squared;
        report.model = model;
        return report;
    }
}
