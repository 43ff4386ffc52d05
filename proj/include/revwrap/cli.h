/*
 * Copyright 2026 The revwrap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef REVWRAP_CLI_H_
#define REVWRAP_CLI_H_

#include <ostream>

#include "revwrap/error.h"

namespace revwrap {

// Process exit codes.
enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitChanged = 3,
  kExitExtraction = 4,
  kExitNetwork = 5,
};

int ExitCodeFor(ErrorCode code);

// revwrap induce|check|extract|serve ...
// JSON goes to `out`, diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revwrap

#endif  // REVWRAP_CLI_H_
