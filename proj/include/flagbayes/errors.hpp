// Copyright 2026 The flagbayes Authors
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

#ifndef FLAGBAYES_ERRORS_HPP
#define FLAGBAYES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flagbayes {

/// Operands disagree on qubit count or vector length.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (Pauli strings, gate specs, config values).
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Layer outcomes that no Pauli error can produce.
struct ContradictionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conditioning on an event of zero probability.
struct ImpossibleOutcomeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric contracts of the update rules (mixture cap, strong coupling, ...).
struct NumericContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MixtureBlowupError : NumericContractError {
    using NumericContractError::NumericContractError;
};

struct StrongCouplingError : NumericContractError {
    using NumericContractError::NumericContractError;
};

struct DegeneratePerturbationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace flagbayes

#endif
