// Copyright 2026 The Symgate Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace symgate {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Shape or dimension mismatch between operands.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error(message) {}
};

// Invalid input carrying a machine-readable code (E_SCHEMA, E_RANGE,
// E_SITES, E_OVERLAP, E_COVERAGE, E_HERMITIAN, E_FILE, ...) and the
// offending field, so callers can map failures to exit codes and reports.
class ValidationError : public Error {
 public:
  ValidationError(std::string code, std::string field, std::string message)
      : Error(code + " [" + field + "]: " + message),
        code_(std::move(code)),
        field_(std::move(field)),
        message_(std::move(message)) {}

  const std::string& code() const { return code_; }
  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }

 private:
  std::string code_;
  std::string field_;
  std::string message_;
};

}  // namespace symgate
