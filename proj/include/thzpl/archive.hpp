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

#ifndef THZPL_ARCHIVE_HPP
#define THZPL_ARCHIVE_HPP

#include "thzpl/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace thzpl
{
    // Run directory layout:
    //   manifest.json   scan ids, placements, sounder metadata
    //   scans/          one sweep CSV per scan or calibration record
    //   samples/        extracted path-loss samples
    //   fits/           fit reports and plot data
    inline constexpr int kManifestSchemaVersion = 1;

    // Exclusive advisory lock on a run directory, released on destruction
    class RunDirLock
    {
    public:
        explicit RunDirLock(const std::filesystem::path &run_dir);
        ~RunDirLock();
        RunDirLock(const RunDirLock &) = delete;
        RunDirLock &operator=(const RunDirLock &) = delete;

    private:
        std::filesystem::path lock_path_;
    };

    std::string manifest_json(const SweepFile &file, double grid_step_deg);

    // Validates every scan, then writes scans/ and manifest.json. Returns the manifest text.
    std::string write_run_archive(const std::filesystem::path &run_dir, const SweepFile &file, double grid_step_deg);

    // Scans and calibration records with the sounder metadata recorded in the manifest
    SweepFile load_run_archive(const std::filesystem::path &run_dir);

    std::filesystem::path samples_path(const std::filesystem::path &run_dir);
    std::filesystem::path fits_dir(const std::filesystem::path &run_dir);

    // File-system safe form of an identifier
    std::string sanitize_id(const std::string &id);
}

#endif
