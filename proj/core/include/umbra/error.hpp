#pragma once

#include <stdexcept>
#include <string>

namespace umbra {

/// Invalid run configuration (missing paths, out-of-range parameters).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (corrupt files, shape mismatches,
/// violated invariants in ingested assets). The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace umbra
