#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scottlab {

// Bad input: malformed file, failed precondition, unknown name.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Caps {
  std::size_t universe = 8;        // automorphism / isomorphism search
  std::size_t tuples = 1'000'000;  // tuple spaces (bf tables, orbit partitions)
};

}  // namespace scottlab
