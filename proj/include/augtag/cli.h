// Copyright 2026 The Augtag Authors.
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


#ifndef AUGTAG_CLI_H_
#define AUGTAG_CLI_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "augtag/config.h"

namespace augtag {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

// Reads "key = value" lines; '#' starts a comment. Unknown keys are
// rejected by RunConfig::FromKeyValues.
std::map<std::string, std::string> ReadConfigFile(const std::string &path);

// Entry point of the augtag tool. Messages go to `out` and `err`.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

}  // namespace augtag

#endif  // AUGTAG_CLI_H_
