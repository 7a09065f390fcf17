#pragma once

#include <stdexcept>

namespace sugenn {

/// Base class of every error thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand lengths, widths, or ground sets do not line up.
struct dimension_error : error {
  using error::error;
};

/// A {0,1}^(2n) vector where some coordinate pair breaks the exactly-one rule.
struct malformed_polarization : error {
  using error::error;
};

/// Explicit subset enumeration requested over too many criteria.
struct ground_set_too_large : error {
  using error::error;
};

/// Enumeration or materialization would exceed a caller-supplied limit.
struct limit_exceeded : error {
  using error::error;
};

/// Parameters violate the capacity axioms.
struct invalid_capacity : error {
  using error::error;
};

/// Activation explanation requested for a neuron that did not activate.
struct not_activated : error {
  using error::error;
};

/// Counterfactual target cannot be reached (constant neuron).
struct impossible_target : error {
  using error::error;
};

/// Model or input file is syntactically or structurally invalid.
struct parse_error : error {
  using error::error;
};

}  // namespace sugenn
