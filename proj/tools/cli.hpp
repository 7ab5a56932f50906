/*
 * Copyright 2026 The WaveMV Authors.
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

#ifndef WAVEMV_TOOLS_CLI_HPP_
#define WAVEMV_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace wavemv::cli {

// Runs one command. `args` excludes the program name. Returns the process
// exit code: 0 on success, 1 on runtime errors, 2 on usage errors.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace wavemv::cli

#endif  // WAVEMV_TOOLS_CLI_HPP_
