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

#include "wavemv/error.hpp"

namespace wavemv {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kShape:
      return "shape error";
    case ErrorCode::kDomain:
      return "domain error";
    case ErrorCode::kNumerical:
      return "numerical error";
    case ErrorCode::kFormat:
      return "format error";
    case ErrorCode::kIo:
      return "i/o error";
    case ErrorCode::kUnsupportedVersion:
      return "unsupported version";
    case ErrorCode::kDegenerate:
      return "degenerate input";
    case ErrorCode::kStratification:
      return "stratification error";
    case ErrorCode::kInput:
      return "input error";
  }
  return "unknown error";
}

}  // namespace wavemv
