#pragma once

#include <stdexcept>
#include <string>

namespace ee {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A query point lies outside the closed domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class CoefficientError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Coefficient evaluated outside the admissible state set (e.g. u <= u_min).
class StateError : public Error {
 public:
  StateError(const std::string& what, int node, double value)
      : Error(what), node_(node), value_(value) {}
  int node() const { return node_; }
  double value() const { return value_; }

 private:
  int node_;
  double value_;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace ee
