#pragma once

#include <stdexcept>
#include <string>

namespace cmvflows {

// Invalid input: bad state vector, out-of-range index, non-positive loop, ...
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// A solver ran but did not reach the requested accuracy.  Carries the
// residual actually achieved so callers can decide whether to retry
// with a larger truncation order.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& stage, double achieved, double requested)
      : std::runtime_error(stage + ": residual " + std::to_string(achieved) +
                           " exceeds tolerance " + std::to_string(requested)),
        stage_(stage), achieved_(achieved), requested_(requested) {}
  const std::string& stage() const { return stage_; }
  double achieved() const { return achieved_; }
  double requested() const { return requested_; }

 private:
  std::string stage_;
  double achieved_;
  double requested_;
};

// A multi-stage computation failed; the stage label says where.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& stage, const std::string& msg)
      : std::runtime_error(stage + ": " + msg), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cmvflows
