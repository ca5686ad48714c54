// Copyright 2026 The qrepeat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace qrepeat::cli {

/// Exit status of every command.
enum ExitCode : int {
    kRepeatable = 0,
    kOk = 0,
    kNotRepeatable = 1,
    kFailure = 2,
};

/// Default directory for written reports when no explicit path is given.
inline constexpr const char *kOutDirEnv = "QREPEAT_OUT_DIR";

/// Runs the command line `args` (without the program name). Human-readable
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

struct DemoOptions {
    std::string name = "ex1";
    std::uint32_t n = 2;
    std::vector<double> p;
    double p1 = 0.3;
    double p2 = 0.7;
    std::uint64_t seed = 1;
    std::size_t steps = 10;
};

/// Writes the demo bundle (instrument, certification, POVM, classification,
/// Wold report, sample trajectory, summary) into `dir`. Returns the file
/// names written, in order.
std::vector<std::string> write_demo_bundle(const DemoOptions &options, const std::filesystem::path &dir,
                                           std::ostream &out, std::ostream &err);

}  // namespace qrepeat::cli
