#pragma once

#include <stdexcept>
#include <string>

namespace impest {

// A config document, CLI flag, or summary-id names something unknown.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A closed-form distance MLE does not exist because observed divergence is
// too large (log of a nonpositive argument).
struct saturation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical routine (eigendecomposition, spectral integral) failed to
// deliver the accuracy it promises.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An EM component scale collapsed below the stability floor.
struct collapse_error : std::runtime_error {
  collapse_error(int component_index, const std::string& what)
      : std::runtime_error(what), component(component_index) {}
  int component;
};

// A rejection sampler's estimated acceptance probability is too low to run.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace impest
