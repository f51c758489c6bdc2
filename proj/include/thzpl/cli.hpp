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

#ifndef THZPL_CLI_HPP
#define THZPL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace thzpl
{
    // Runs one command line (args exclude the program name). Success output goes to `out`
    // as JSON or CSV; failures write one JSON object {"error": <code>, "message": ...} to `err`.
    // Exit status: 0 ok, 2 parse, 3 rank-deficient, 4 domain, 5 io.
    int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
}

#endif
