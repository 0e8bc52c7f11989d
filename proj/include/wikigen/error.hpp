#pragma once

#include <stdexcept>
#include <string>

namespace wikigen {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data (dataset records, model replies, config files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A domain invariant was violated (duplicate ids, empty keys, bad ranges).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A remote endpoint failed after retries; message carries diagnostics.
class EndpointError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace wikigen
