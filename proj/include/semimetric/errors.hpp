#ifndef SEMIMETRIC_ERRORS_HPP
#define SEMIMETRIC_ERRORS_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace semimetric {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: ragged or non-square matrices, label mismatches, parse failures.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A matrix that is well formed but violates a semimetric axiom.
class AxiomError : public Error {
public:
    using Error::Error;
};

/// Parameter outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An operation was called on an input that does not meet its hypothesis
/// (e.g. a non-metric space handed to the embedding).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The embedding mapped two distinct points to the same coordinates.
class DegenerateEmbedding : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

} // namespace detail

} // namespace semimetric

#endif
