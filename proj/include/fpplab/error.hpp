#pragma once

#include <stdexcept>
#include <string>

namespace fpplab {

// Config errors map to CLI exit code 2, resource errors to exit code 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct GeodesicOverflowError : std::runtime_error {
  explicit GeodesicOverflowError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fpplab
