// Copyright 2026 The qrepeat Authors
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

#include <optional>
#include <stdexcept>
#include <string>

#include "qrepeat/core.hpp"

namespace qrepeat {

/// One matrix entry where two operators disagree.
struct EntryWitness {
    BasisIndex row = 0;
    BasisIndex col = 0;
    Coefficient expected{};
    Coefficient actual{};

    double deviation() const {
        return std::abs(expected - actual);
    }
    std::string str() const;
};

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class PeriodCapExceeded : public Error {
   public:
    using Error::Error;
};

class UnsupportedForm : public Error {
   public:
    using Error::Error;
};

class BadProbabilityVector : public Error {
   public:
    using Error::Error;
};

class CoverageViolation : public Error {
   public:
    using Error::Error;
};

class InvalidPovm : public Error {
   public:
    using Error::Error;
};

class WindowInvalid : public Error {
   public:
    using Error::Error;
};

class DegenerateState : public Error {
   public:
    using Error::Error;
};

class NotIsometricOnSupport : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

/// Error carrying the entry at which an operator identity failed.
class WitnessedError : public Error {
   public:
    WitnessedError(const std::string &what, std::optional<EntryWitness> witness)
        : Error(witness ? what + " at " + witness->str() : what), witness_(witness) {
    }
    const std::optional<EntryWitness> &witness() const {
        return witness_;
    }

   private:
    std::optional<EntryWitness> witness_;
};

class CompletenessViolation : public WitnessedError {
   public:
    using WitnessedError::WitnessedError;
};

class ContractionViolation : public Error {
   public:
    ContractionViolation(const std::string &what, BasisIndex column, double norm)
        : Error(what), column_(column), norm_(norm) {
    }
    BasisIndex column() const {
        return column_;
    }
    double norm() const {
        return norm_;
    }

   private:
    BasisIndex column_;
    double norm_;
};

/// A (V, W) decomposition condition failed. `condition()` names which one.
class PartsViolation : public WitnessedError {
   public:
    PartsViolation(std::string condition, std::optional<EntryWitness> witness)
        : WitnessedError("part condition '" + condition + "' violated", witness),
          condition_(std::move(condition)) {
    }
    const std::string &condition() const {
        return condition_;
    }

   private:
    std::string condition_;
};

class SplitInvariantViolation : public WitnessedError {
   public:
    using WitnessedError::WitnessedError;
};

}  // namespace qrepeat
