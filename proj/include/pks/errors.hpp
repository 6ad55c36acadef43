#ifndef PKS_ERRORS_HPP
#define PKS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pks {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied parameter (non-positive sigma, m <= 2, ...).
struct invalid_parameter_error : error {
  using error::error;
};

// A nonlinearity failed one of the structural hypotheses (unique well, convexity, growth).
struct hypothesis_error : error {
  using error::error;
};

// An iterative numerical procedure failed to converge; message carries diagnostics.
struct numerical_error : error {
  using error::error;
};

// Argument outside the mathematical domain of the operation.
struct domain_error : error {
  using error::error;
};

// Experiment/file configuration is unusable (under-resolved layer, bad geometry, ...).
struct config_error : error {
  using error::error;
};

// A time step could not be completed (dt underflow, NaN state).
struct step_error : error {
  using error::error;
};

// A requested feature (level set, crossing) does not exist in the data.
struct not_found_error : error {
  using error::error;
};

}  // namespace pks

#endif
