#pragma once

#include <stdexcept>
#include <string>

namespace cnselmer {

// Bad arguments or malformed input. CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (e.g. a prime that is
// not 1 mod 8 passed to the quartic character). CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Allocation failures, unreadable or corrupt cache files. CLI exit code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cnselmer
