#ifndef GREENNET_ERRORS_H
#define GREENNET_ERRORS_H

#include <stdexcept>

namespace greennet {

// Malformed or inconsistent input (files, configs, hand-built instances).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No plan satisfies the constraints (or, for heuristics, none was found).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The exact solver refuses instances beyond its enumeration limits.
class InstanceTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace greennet

#endif  // GREENNET_ERRORS_H
