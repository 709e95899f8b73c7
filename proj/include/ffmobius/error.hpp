#pragma once

#include <stdexcept>
#include <string>

namespace ffm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (composite p, non-coprime pair, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A table or enumeration would exceed the configured size cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Operation not available for these parameters (e.g. quadratic character in characteristic 2).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace ffm
