// Copyright 2026 The Splitpriv Authors
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

#ifndef SPLITPRIV_TOOLS_CLI_H_
#define SPLITPRIV_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace splitpriv {

// Runs one `splitpriv <subcommand> ...` invocation. Returns the process exit
// code: 0 on success, 1 when the command fails, 2 on a usage error. Failures
// print a single line "error: <CODE>: <message>" to err.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace splitpriv

#endif  // SPLITPRIV_TOOLS_CLI_H_
