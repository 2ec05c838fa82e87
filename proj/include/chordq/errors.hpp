#pragma once

#include <stdexcept>
#include <string>

namespace chordq {

// Bad user input: malformed words, unknown generators, out-of-range degrees.
class InvalidArgument : public std::runtime_error {
public:
    explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

// A computation exceeded a configured size or time budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed; always a bug, never user error.
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chordq
