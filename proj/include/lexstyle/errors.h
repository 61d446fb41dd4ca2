// Copyright 2026 The lexstyle Authors.
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

#ifndef LEXSTYLE_ERRORS_H_
#define LEXSTYLE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexstyle {

// Base for every error the library raises on bad data or misuse.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input whose values violate the schema (unknown label, ...).
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Query token missing from the embedding vocabulary.
class OovError : public Error {
 public:
  explicit OovError(const std::string& token)
      : Error("token not in embedding vocabulary: " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Mathematically undefined result (zero vector, zero variance, P(E)=1...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Optimization diverged or was configured inconsistently.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexstyle

#endif  // LEXSTYLE_ERRORS_H_
