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

#include <cmath>
#include <numbers>
#include <sstream>

namespace thzpl
{
    namespace
    {
        void require_positive(double value, const char *what)
        {
            if (!(value > 0.0) || !std::isfinite(value))
            {
                std::ostringstream msg;
                msg << what << " must be positive and finite, got " << value;
                throw Error(ErrorCode::DomainError, msg.str());
            }
        }

        void require_reference_distance(double d_m)
        {
            require_positive(d_m, "distance");
            if (d_m < kReferenceDistanceM)
            {
                std::ostringstream msg;
                msg << "distance " << d_m << " m is below the 1 m reference distance";
                throw Error(ErrorCode::DomainError, msg.str());
            }
        }
    }

    double fspl_db(double f_ghz, double d_m)
    {
        require_positive(f_ghz, "frequency");
        require_positive(d_m, "distance");
        return 20.0 * std::log10(4.0 * std::numbers::pi * f_ghz * 1e9 * d_m / kSpeedOfLight);
    }

    double ci_predict(const CiModel &m, double d_m)
    {
        require_reference_distance(d_m);
        return 10.0 * m.ple * std::log10(d_m / kReferenceDistanceM) + fspl_db(m.frequency_ghz, kReferenceDistanceM);
    }

    double abg_predict(const AbgModel &m, double d_m, double f_ghz)
    {
        require_reference_distance(d_m);
        require_positive(f_ghz, "frequency");
        return 10.0 * m.alpha * std::log10(d_m / kReferenceDistanceM) + m.beta_db +
               10.0 * m.gamma * std::log10(f_ghz / kReferenceFrequencyGhz);
    }

    double cif_predict(const CifModel &m, double d_m, double f_ghz)
    {
        require_reference_distance(d_m);
        require_positive(f_ghz, "frequency");
        require_positive(m.f_avg_ghz, "average frequency");
        const double ple = m.n * (1.0 + m.b * (f_ghz - m.f_avg_ghz) / m.f_avg_ghz);
        return 10.0 * ple * std::log10(d_m / kReferenceDistanceM) + fspl_db(f_ghz, kReferenceDistanceM);
    }

    double predict(const PathLossModel &m, double d_m, double f_ghz)
    {
        struct Visitor
        {
            double d, f;
            double operator()(const CiModel &ci) const { return ci_predict(ci, d); }
            double operator()(const AbgModel &abg) const { return abg_predict(abg, d, f); }
            double operator()(const CifModel &cif) const { return cif_predict(cif, d, f); }
        };
        return std::visit(Visitor{d_m, f_ghz}, m);
    }

    std::optional<double> sigma_sf_db(const PathLossModel &m)
    {
        if (const auto *ci = std::get_if<CiModel>(&m))
            return ci->sigma_sf_db;
        if (const auto *abg = std::get_if<AbgModel>(&m))
            return abg->sigma_sf_db;
        return std::get<CifModel>(m).sigma_sf_db;
    }

    double weighted_avg_frequency(std::span<const FrequencyCount> counts)
    {
        double weighted = 0.0;
        std::size_t total = 0;
        for (const auto &c : counts)
        {
            weighted += c.frequency_ghz * static_cast<double>(c.count);
            total += c.count;
        }
        if (total == 0)
            throw Error(ErrorCode::EmptyDataset, "no samples to weight frequencies by");
        return weighted / static_cast<double>(total);
    }

    double ShadowFading::draw(double sigma_db)
    {
        if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db))
            throw Error(ErrorCode::DomainError, "shadow-fading sigma must be non-negative");
        return sigma_db * normal_(engine_);
    }
}
