#pragma once

#include <stdexcept>
#include <string>

namespace mgems {

// Exit-code mapping used by the CLI: validation 4, infeasible 2, resource 3.

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidBoundsError : ValidationError {
    explicit InvalidBoundsError(const std::string& msg) : ValidationError(msg) {}
};

struct DimensionError : ValidationError {
    explicit DimensionError(const std::string& msg) : ValidationError(msg) {}
};

struct StateError : ValidationError {
    explicit StateError(const std::string& msg) : ValidationError(msg) {}
};

struct NoDroopError : ValidationError {
    explicit NoDroopError(const std::string& msg) : ValidationError(msg) {}
};

struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solved MILP whose recomputed trajectory disagrees with its own variables
// signals a bug in the encoding, not bad input.
struct EncodingDefectError : std::logic_error {
    explicit EncodingDefectError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace mgems
