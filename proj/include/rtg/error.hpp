#pragma once

#include <stdexcept>
#include <string>

namespace rtg {

// Bad input: malformed partitions, parameters outside their range, unsupported requests.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that would exceed an enumeration or memory guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rtg
