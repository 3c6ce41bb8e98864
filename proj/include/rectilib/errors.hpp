#pragma once

#include <stdexcept>
#include <string>

namespace rectilib {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point id (or cube id) does not exist.
class IdentifierError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but carries no usable information (all-zero masses, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Operation needs Euclidean coordinates but the space only has a distance matrix.
class UnsupportedMetricError : public Error {
 public:
  using Error::Error;
};

/// Target set is not contained in the root cube.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

class ConnectivityError : public Error {
 public:
  ConnectivityError(const std::string& what, std::size_t components)
      : Error(what), components_(components) {}
  std::size_t components() const noexcept { return components_; }

 private:
  std::size_t components_;
};

/// Malformed input file.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace rectilib
