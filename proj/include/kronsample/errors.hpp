#pragma once

#include <stdexcept>
#include <string>

namespace kronsample {

// Budget/cap combination that admits no valid selection. CLI exit code 2.
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Selection that cannot identify the core coefficients. CLI exit code 3.
class identifiability_error : public std::runtime_error {
 public:
  explicit identifiability_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace kronsample
