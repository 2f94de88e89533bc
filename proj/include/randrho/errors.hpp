#pragma once

#include <stdexcept>
#include <string>

namespace randrho {

// Invalid run configuration or ensemble specification (CLI exit code 2).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical invariant failed at runtime (CLI exit code 3).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace randrho
