/*
 * Copyright 2026 The multiuplift Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MULTIUPLIFT_CLI_H_
#define MULTIUPLIFT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace multiuplift::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFit = 4;

// Runs `uplift <subcommand> [flags]`. args[0] is the program name.
// Subcommands: simulate, train, score, select, evaluate. Each accepts
// --config FILE with flat key=value lines; explicit flags override it.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multiuplift::cli

#endif  // MULTIUPLIFT_CLI_H_
