#pragma once

#include <stdexcept>
#include <string>

namespace satdelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constellation parameters that cannot describe a constellation.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// An argument outside the domain of a delay or metric formula.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Greedy route search reached a satellite whose neighbors were all visited.
class RoutingFailure : public Error {
public:
    using Error::Error;
};

/// Malformed input file or simulation scenario.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

}  // namespace satdelay
