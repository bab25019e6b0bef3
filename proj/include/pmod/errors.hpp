#pragma once

#include <stdexcept>
#include <string>

namespace pmod {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (edge lists, JSON documents, family specs).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// The requested family has no objects (e.g. disconnected endpoints) or
// violates non-triviality (a row with no positive usage).
class FamilyEmptyError : public Error {
public:
    explicit FamilyEmptyError(const std::string& what) : Error(what) {}
};

// A combinatorial guard was exceeded; the operation refuses rather than
// truncate its output.
class GuardError : public Error {
public:
    explicit GuardError(const std::string& what) : Error(what) {}
};

// The operation is not defined for this family kind or graph type.
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error(what) {}
};

} // namespace pmod
