#pragma once

#include <stdexcept>
#include <string>

namespace s2t {

// Bad configs, violated preconditions, malformed files. CLI exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Randomized search exhausted its budget (ladder and retries). CLI exit code 3.
struct SearchError : std::runtime_error {
  explicit SearchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace s2t
