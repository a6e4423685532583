// Copyright 2026 The mmnla Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mmnla {

/// Bad input: violated precondition, malformed configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical guard during an otherwise valid run.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The truncated Fock basis is too small for the requested state.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A density matrix handed to an entanglement measure is not unit trace.
class NotNormalizedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An objective returned NaN or infinity during a parameter search.
class NonFiniteObjectiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No parameter choice satisfies a constraint.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mmnla
