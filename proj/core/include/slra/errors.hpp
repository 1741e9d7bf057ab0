// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace slra {

/// Incompatible shapes fed to a matrix or layer operation.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Operation issued in the wrong lifecycle state (double backward,
/// transition without adapters, stage 2 without a stage-1 checkpoint).
class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data failed validation.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; message carries the line number where known.
class ParseError : public DataError {
public:
    using DataError::DataError;
};

/// Structurally valid input that violates a declared constraint;
/// message names the offending record.
class ValidationError : public DataError {
public:
    using DataError::DataError;
};

/// Checkpoint and manifest do not fit together (dimension or label set).
class CompatibilityError : public DataError {
public:
    using DataError::DataError;
};

} // namespace slra
