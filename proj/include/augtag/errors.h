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

#ifndef AUGTAG_ERRORS_H_
#define AUGTAG_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace augtag {

// Bad input data or configuration. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus or prediction file. Carries the 1-based line number
// (0 when the error is not tied to a line).
class ParseError : public ValidationError {
 public:
  ParseError(const std::string &message, int64_t line)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " +
                                       message
                                 : message),
        line_(line) {}

  int64_t line() const { return line_; }

 private:
  int64_t line_;
};

// Unreadable or unwritable files. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced or was fed NaN/Inf.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace augtag

#endif  // AUGTAG_ERRORS_H_
