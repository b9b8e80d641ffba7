/*
 * Copyright 2026 The Controversy Rules Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace controversy {

enum class ErrorKind {
  kIo,             // file cannot be opened or written
  kSchema,         // schema document is malformed or inconsistent with the data
  kLoad,           // a data cell cannot be parsed
  kDimension,      // matrix/dataset shapes disagree
  kLabel,          // class label outside the fixed dictionary
  kConfig,         // invalid configuration or measure precondition on the full dataset
  kUndefined,      // measure undefined on the given input (empty subgroup, one-class rasl, ...)
  kMissingTruth,   // measure needs a ground-truth column
  kBinaryOnly,     // measure needs exactly two classes
  kOracleTooLarge  // exhaustive search exceeded its candidate budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for an error: 2 for usage/config/input problems, 1 otherwise.
[[nodiscard]] inline int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kUndefined:
    case ErrorKind::kOracleTooLarge:
      return 1;
    default:
      return 2;
  }
}

}  // namespace controversy
