#pragma once

#include <stdexcept>
#include <string>

namespace ixg {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class EmptySet : public Error {
public:
    using Error::Error;
};

class EmptyIntersection : public Error {
public:
    using Error::Error;
};

/// A query endpoint lies in none of the graph's convex sets.
class QueryOutsideCover : public Error {
public:
    enum class Endpoint { Start, Goal, Point };

    QueryOutsideCover(Endpoint which, const std::string& what)
        : Error(what), endpoint_(which) {}

    Endpoint endpoint() const noexcept { return endpoint_; }

private:
    Endpoint endpoint_;
};

class StateError : public Error {
public:
    using Error::Error;
};

class OracleTooLarge : public Error {
public:
    using Error::Error;
};

/// Scenario / spec / cache file could not be read.
class ParseError : public Error {
public:
    using Error::Error;
};

class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

}  // namespace ixg
