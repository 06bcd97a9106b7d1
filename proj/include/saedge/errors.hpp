#pragma once

#include <stdexcept>
#include <string>

namespace saedge {

// Raised for invalid input data: bad shapes, malformed files, degenerate statistics.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for invalid command-line usage.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace saedge
