// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAERS_TOOLS_CLI_H_
#define SAERS_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace saers::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

// args[0] is the program name. Normal output goes to `out`, diagnostics to
// `err` with an "error:" prefix.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace saers::cli

#endif  // SAERS_TOOLS_CLI_H_
