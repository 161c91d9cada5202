/* Copyright 2026 The dabnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace dabnet {

// Every failure raised by the library derives from Error so callers (the CLI in
// particular) can report a one-line diagnostic without knowing the subtype.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Convolution or pooling geometry that would produce an empty spatial extent.
class DegenerateError : public ShapeError {
 public:
  using ShapeError::ShapeError;
};

// Network input whose spatial dims violate the multiple-of-8 rule.
class InputShapeError : public ShapeError {
 public:
  using ShapeError::ShapeError;
};

class AllocationError : public Error {
 public:
  using Error::Error;
};

class WeightStoreError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public FormatError {
 public:
  TruncationError(const std::string& what, std::size_t offset)
      : FormatError(what + " (truncated at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Label values outside the class range.
class DataError : public Error {
 public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace dabnet
