#pragma once

#include <stdexcept>
#include <string>

namespace sdefit {

/// Model callback returned a non-finite value; carries the evaluation point.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double t)
      : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// A simulated or predicted state left the finite range; carries the step.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// A matrix that must be symmetric positive definite failed factorization.
class NonPdError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Subsampling interval incommensurate with the fine grid step.
class GridMismatchError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad key, value, or combination in an experiment configuration.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Could not read or write an output file.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sdefit
