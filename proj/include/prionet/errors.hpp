#pragma once

#include <stdexcept>
#include <string>

namespace prionet {

/// Invalid model description (bad parameters, malformed topology, parse failures).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (blow-up, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prionet
