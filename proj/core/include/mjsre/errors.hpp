#pragma once

#include <stdexcept>
#include <string>

namespace mjsre {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A job asks for more servers than exist (or for none).
class DemandError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario, distribution parameters or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace mjsre
