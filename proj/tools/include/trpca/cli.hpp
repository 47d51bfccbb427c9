// Copyright 2026 The trpca Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trpca/lab.hpp"

namespace trpca::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kNumerical = 3,
};

/// Runs the `trpca` command line. args excludes the program name. Normal
/// output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands `--config FILE` into `--key=value` arguments placed ahead of the
/// remaining flags, so later flags override the file. Lines are key=value;
/// blank lines and lines starting with '#' are skipped. Throws IoError when
/// the file cannot be read and InvalidArgument on malformed lines.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// Parses an experiment subcommand (certify, concentrate or phase) and its
/// flags without running anything. Throws InvalidArgument on usage errors.
lab::ExperimentConfig parse_experiment(const std::vector<std::string>& args);

}  // namespace trpca::cli
