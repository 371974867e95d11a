/*
 * Copyright 2026 The fredholm Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fredholm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of the operation
/// (e.g. restricting to t outside (0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A precondition on kernel metadata was violated (e.g. a non-triangular
/// factor handed to the synthesis routine).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Raised when the fredholm series is asked for an order above the cost guard.
class CostGuardError : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot was not strictly positive.
class NotPositiveDefinite : public NumericError {
 public:
  NotPositiveDefinite(std::size_t index, double pivot)
      : NumericError("matrix is not positive definite: pivot " +
                     std::to_string(pivot) + " at index " +
                     std::to_string(index)),
        index_(index),
        pivot_(pivot) {}

  std::size_t index() const noexcept { return index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t index_;
  double pivot_;
};

}  // namespace fredholm
