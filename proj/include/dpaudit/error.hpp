// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPAUDIT_ERROR_HPP_
#define DPAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dpaudit {

// Broad failure classes. The CLI maps each class onto a stable exit code.
enum class ErrorKind {
  kDomain,     // argument outside its mathematical domain
  kDimension,  // length / shape mismatch
  kData,       // malformed or inconsistent input data
  kGrid,       // numeric grid too small or too large
  kFit,        // optimisation or inversion failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::kDimension, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

class GridError : public Error {
 public:
  explicit GridError(const std::string& what) : Error(ErrorKind::kGrid, what) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& what) : Error(ErrorKind::kFit, what) {}
};

namespace internal {

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace internal
}  // namespace dpaudit

#endif  // DPAUDIT_ERROR_HPP_
