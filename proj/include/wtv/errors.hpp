#pragma once

#include <stdexcept>
#include <string>

namespace wtv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grids or operators whose side lengths do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent parameters (step bounds, penalty bounds, config keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterate stopped being finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wtv
