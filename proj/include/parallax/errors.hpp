/*
 * Copyright 2026 The Parallax Blur Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PARALLAX_ERRORS_HPP_
#define PARALLAX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace parallax {

// Input outside the mathematical domain of an operation (e.g. depth <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a precondition that is not a data-domain problem
// (mismatched layer counts, even support sizes, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& reason)
      : std::runtime_error(path + ": " + reason), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// NaN/Inf produced during optimization or another numerical failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parallax

#endif  // PARALLAX_ERRORS_HPP_
