// Copyright 2026 The bnol Authors.
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

#ifndef BNOL_ERRORS_HPP
#define BNOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bnol {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorCategory : int {
  kUsage = 2,    // bad arguments, invalid inputs, refused instance sizes
  kNumeric = 3,  // degenerate or numerically failed computation
  kIo = 4,       // file open/parse failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& msg)
      : std::runtime_error(msg), category_(category) {}

  ErrorCategory category() const { return category_; }
  int exit_code() const { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

// Input-contract violations.
struct NotChordalError : Error {
  explicit NotChordalError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};
struct TooLargeError : Error {
  explicit TooLargeError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};
struct MissingCptError : Error {
  explicit MissingCptError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};
struct InsufficientSamplesError : Error {
  explicit InsufficientSamplesError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};

// Computation failures.
struct NonPositiveTotalError : Error {
  explicit NonPositiveTotalError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};
struct NoArborescenceError : Error {
  explicit NoArborescenceError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};
struct NotOrientableError : Error {
  explicit NotOrientableError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};
struct NumericIntegrityError : Error {
  explicit NumericIntegrityError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};
struct GenerationFailedError : Error {
  explicit GenerationFailedError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCategory::kIo, msg) {}
};

}  // namespace bnol

#endif  // BNOL_ERRORS_HPP
