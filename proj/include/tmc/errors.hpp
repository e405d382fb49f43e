#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tmc {

/// Malformed or inconsistent configuration (bad file, bad key, bad combination).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Demodulation failure. Carries any bits recovered before the failure.
struct DecodeError : std::runtime_error {
  explicit DecodeError(const std::string& msg, std::string partial = {})
      : std::runtime_error(msg), partial_bits(std::move(partial)) {}
  std::string partial_bits;
};

/// Calibration fit cannot be performed on the given points.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tmc
