// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
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

#ifndef SAERS_ERROR_H_
#define SAERS_ERROR_H_

#include <stdexcept>
#include <string>

namespace saers {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inputs that are well-formed but inconsistent (unknown ids, dimension
// mismatches, schema violations, empty datasets).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or incompatible checkpoint configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or numeric checks that failed.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace saers

#endif  // SAERS_ERROR_H_
