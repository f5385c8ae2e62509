#pragma once

#include <stdexcept>
#include <string>

namespace saguin {

/// Scenario or link parameters that cannot describe a valid network.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A schedule that references a (k, u) pair the topology cannot serve.
class SchedulingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Training diverged (probability ratios blew up).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace saguin
