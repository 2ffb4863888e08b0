// Copyright 2026 The gradcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRADCODE_ERRORS_HPP_
#define GRADCODE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gradcode {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters outside a constructor's admissible range.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Real BCH construction requested with n ≡ s (mod 2).
class ParityMismatch : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

/// A survivor set whose size does not match the decoder's contract.
class WrongSetSize : public Error {
 public:
  using Error::Error;
};

/// A decoder was handed an empty survivor set.
class EmptySet : public Error {
 public:
  using Error::Error;
};

/// Two interpolation nodes coincide within tolerance.
class DuplicateNode : public Error {
 public:
  using Error::Error;
};

/// Triangular back-substitution hit a zero diagonal entry.
class SingularTriangular : public Error {
 public:
  using Error::Error;
};

/// A Vandermonde block was numerically singular.
class SingularVandermonde : public Error {
 public:
  using Error::Error;
};

/// A graph operation required a connected graph.
class Disconnected : public Error {
 public:
  using Error::Error;
};

/// Random graph generation exhausted its retry budget.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// Exhaustive verification would exceed the configured subset cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix dimensions disagree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A worker was asked to combine a partial gradient it does not hold.
class MissingPart : public Error {
 public:
  using Error::Error;
};

/// Fewer examples than data partitions.
class TooFewExamples : public Error {
 public:
  using Error::Error;
};

}  // namespace gradcode

#endif  // GRADCODE_ERRORS_HPP_
