#pragma once

#include <stdexcept>
#include <string>

namespace sprkit {

// Malformed graph input: bad header, duplicate edge, self-loop, non-positive
// weight, unreachable vertex.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant was observed to fail at runtime. Always a bug or a
// violated precondition upstream, never expected data.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sprkit
