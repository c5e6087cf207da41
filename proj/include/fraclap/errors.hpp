#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (bad s, growth exponent too large,
// malformed input files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A sampled function value was not finite.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double node)
      : Error(what), node_(node) {}
  double node() const { return node_; }

 private:
  double node_;
};

// A linear solve could not be certified at the working precision.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// A certified approximation bound could not be reached.
class ApproximationError : public Error {
 public:
  ApproximationError(const std::string& what, double best_bound)
      : Error(what), best_bound_(best_bound) {}
  double best_bound() const { return best_bound_; }

 private:
  double best_bound_;
};

}  // namespace fraclap
