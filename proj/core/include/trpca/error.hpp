// Copyright 2026 The trpca Authors. All Rights Reserved.
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

namespace trpca {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible, or an index is out of range.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed: non-convergence, divergence, or a residual
/// above tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a tensor file failed.
class IoError : public Error {
 public:
  enum class Kind {
    kOpenFailed,
    kBadMagic,
    kUnsupportedVersion,
    kDimensionOverflow,
    kTruncatedPayload,
    kTrailingData,
    kNonFiniteValue,
    kWriteFailed,
  };

  IoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace trpca
