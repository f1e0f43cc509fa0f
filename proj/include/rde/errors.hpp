#pragma once

#include <stdexcept>
#include <string>

namespace rde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
public:
    NotPositiveDefinite(const std::string& what, int pivot)
        : Error(what), pivot_(pivot) {}
    int pivot() const { return pivot_; }

private:
    int pivot_;
};

class NonSquare : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class SingularD : public Error {
public:
    SingularD(const std::string& what, double at_time)
        : Error(what), at_time_(at_time) {}
    double at_time() const { return at_time_; }

private:
    double at_time_;
};

class AlphaOutOfRange : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class NonPositiveLambda : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed problem input. `location` is a JSON pointer into the document.
class ParseError : public Error {
public:
    ParseError(const std::string& location, const std::string& what)
        : Error(location.empty() ? what : location + ": " + what),
          location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

/// Well-formed input that violates a problem invariant.
class ValidationError : public Error {
public:
    ValidationError(const std::string& location, const std::string& what)
        : Error(location.empty() ? what : location + ": " + what),
          location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace rde
