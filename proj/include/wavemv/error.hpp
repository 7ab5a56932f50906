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

#ifndef WAVEMV_ERROR_HPP_
#define WAVEMV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wavemv {

// Every failure raised by the library carries one of these codes. The C API
// maps them one-to-one onto wmv_status values.
enum class ErrorCode {
  kInvalidArgument = 1,  // precondition on a scalar parameter violated
  kShape,                // dimension mismatch or empty input
  kDomain,               // non-finite numeric input
  kNumerical,            // singular system, divergence, non-finite iterate
  kFormat,               // malformed file contents
  kIo,                   // file cannot be opened or written
  kUnsupportedVersion,   // model file schema too new / unknown
  kDegenerate,           // statistic or transform undefined for the input
  kStratification,       // a fold would lose a class
  kInput,                // dataset-level precondition (too few rows, ...)
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wavemv

#endif  // WAVEMV_ERROR_HPP_
