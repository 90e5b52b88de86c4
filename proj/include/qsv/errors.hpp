#pragma once

#include <stdexcept>
#include <string>

namespace qsv {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct UnsupportedDimension : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ZeroState : Error {
    using Error::Error;
};

struct NotAchievable : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

struct DegenerateFit : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

// Configuration / usage problems (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem problems (CLI exit code 3).
struct IoError : Error {
    using Error::Error;
};

// Malformed data files or numeric failures (CLI exit code 4).
struct DataError : Error {
    using Error::Error;
};

}  // namespace qsv
