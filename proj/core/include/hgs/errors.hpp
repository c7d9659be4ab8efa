// core/include/hgs/errors.hpp

// Copyright 2026  The HGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HGS_ERRORS_HPP_
#define HGS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hgs {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File-system level problems: a referenced path does not exist or cannot
// be opened/written.
class MissingFileError : public Error {
 public:
  explicit MissingFileError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// A manifest, config or binary file does not satisfy its schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

class LabelOutOfRangeError : public Error {
 public:
  explicit LabelOutOfRangeError(const std::string& msg) : Error(msg) {}
};

class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(const std::string& msg) : Error(msg) {}
};

class EmptySelectionError : public Error {
 public:
  explicit EmptySelectionError(const std::string& msg) : Error(msg) {}
};

class TooFewSamplesError : public Error {
 public:
  explicit TooFewSamplesError(const std::string& msg) : Error(msg) {}
};

class FactorOutOfRangeError : public Error {
 public:
  explicit FactorOutOfRangeError(const std::string& msg) : Error(msg) {}
};

class ClipTooShortError : public Error {
 public:
  explicit ClipTooShortError(const std::string& msg) : Error(msg) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& msg) : Error(msg) {}
};

class SessionTooLongError : public Error {
 public:
  explicit SessionTooLongError(const std::string& msg) : Error(msg) {}
};

class ShapeMismatchError : public Error {
 public:
  explicit ShapeMismatchError(const std::string& msg) : Error(msg) {}
};

class LengthMismatchError : public Error {
 public:
  explicit LengthMismatchError(const std::string& msg) : Error(msg) {}
};

class ValueOutOfRangeError : public Error {
 public:
  explicit ValueOutOfRangeError(const std::string& msg) : Error(msg) {}
};

// Training aborts when the total loss stops being finite.
class NonFiniteLossError : public Error {
 public:
  explicit NonFiniteLossError(const std::string& msg) : Error(msg) {}
};

}  // namespace hgs

#endif  // HGS_ERRORS_HPP_
