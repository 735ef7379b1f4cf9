#pragma once

#include <stdexcept>
#include <string>

namespace helpfuse {

// Failure caused by user-supplied data or configuration (malformed files,
// out-of-range values, infeasible settings). The CLI maps this to exit code 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace helpfuse
