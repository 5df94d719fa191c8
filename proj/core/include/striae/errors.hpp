#pragma once

#include <stdexcept>
#include <string>

namespace striae {

// File could not be read or written.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// File content violates a format contract. Messages name the offending
// row/column or cell where known.
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// Caller passed an out-of-contract argument.
class argument_error : public std::invalid_argument {
public:
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation became numerically degenerate (zero variance, singular
// system, infeasible moments, missing sign change).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace striae
