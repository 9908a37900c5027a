// Copyright 2026 The lutaug Authors.
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

#ifndef LUTAUG_ERRORS_H_
#define LUTAUG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lutaug {

// Precondition violations (bad sizes, shapes, off-simplex weights, ...) are
// reported as std::invalid_argument. The types below cover the remaining
// failure classes that callers need to tell apart.

// Malformed text input. `line` is 1-based, or 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A foreground-restricted metric was asked to average over zero pixels.
class EmptyForegroundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The Bradley-Terry likelihood has no finite maximizer for the given wins.
class NonIdentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system or codec failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lutaug

#endif  // LUTAUG_ERRORS_H_
