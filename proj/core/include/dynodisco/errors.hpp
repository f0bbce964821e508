#pragma once

#include <stdexcept>
#include <string>

namespace dynodisco {

/// Thrown when an ODE integration produces a non-finite state or the
/// adaptive controller underflows its step size. Carries the last time at
/// which the state was still finite and the index of the failing step.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double last_valid_time, long step_index)
      : std::runtime_error(what), last_valid_time_(last_valid_time), step_index_(step_index) {}

  double last_valid_time() const { return last_valid_time_; }
  long step_index() const { return step_index_; }

 private:
  double last_valid_time_;
  long step_index_;
};

class InitializationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AdaptationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynodisco
