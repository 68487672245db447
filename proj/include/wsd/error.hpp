#pragma once

#include <stdexcept>
#include <string>

namespace wsd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input; the message always carries a location (file, line, instance id or byte offset).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Persisted artifact produced by an incompatible writer (magic, version or schema hash mismatch).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace wsd
