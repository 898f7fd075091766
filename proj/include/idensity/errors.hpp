#pragma once

#include <stdexcept>
#include <string>

namespace idensity {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (empty sample, zero C, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Compressor failure; carries the identifier of the compressor involved.
class EstimatorError : public Error {
public:
    EstimatorError(std::string compressor_id, const std::string& what)
        : Error(compressor_id + ": " + what), compressor_id_(std::move(compressor_id)) {}

    const std::string& compressor_id() const noexcept { return compressor_id_; }

private:
    std::string compressor_id_;
};

/// Invalid parameters for a reference system.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A memoizing system was asked for an entry outside its stored range.
class RangeExhausted : public Error {
public:
    using Error::Error;
};

/// The requested operation is not defined for this kind of system or oracle.
class Unsupported : public Error {
public:
    using Error::Error;
};

}  // namespace idensity
