#pragma once

#include <stdexcept>
#include <string>

namespace cglasso {

  // Dimension or index mismatch between arguments.
  struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
  };

  // NaN or infinity where a finite value is required.
  struct NonFinite : std::domain_error {
    using std::domain_error::domain_error;
  };

  struct NotPositiveDefinite : std::domain_error {
    using std::domain_error::domain_error;
  };

  // The partially specified matrix has no positive definite completion
  // (a pivot in the recursion fell below the completability threshold).
  struct NotCompletable : std::domain_error {
    using std::domain_error::domain_error;
  };

  // The pattern does not factor without fill in the given order.
  struct NotNoFill : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
  };

  struct NotChordal : std::domain_error {
    NotChordal(std::string const& what, int component_index)
      : std::domain_error(what), component(component_index) {}
    int component;
  };

  struct NotACorrelation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
  };

  // lambda coincides with one of the off-diagonal magnitudes.
  struct AmbiguousLevel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
  };

  struct TooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
  };

  struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

} // namespace cglasso
