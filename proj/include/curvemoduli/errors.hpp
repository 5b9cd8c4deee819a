#pragma once

#include <stdexcept>
#include <string>

namespace curvemoduli {

// Bad input: malformed files, unseparated jets, non-minimal trees.
// The command line tool maps this to exit code 1.
class input_error : public std::runtime_error {
  public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Broken internal invariant. These are never recoverable: either the input
// escaped validation or the implementation is wrong. Exit code 2.
class invariant_error : public std::logic_error {
  public:
    explicit invariant_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace curvemoduli
