#pragma once

#include <stdexcept>
#include <string>

namespace dqd {

// Malformed input: shapes, non-finite entries, non-Hermitian generators.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A hardware control constraint was violated (negative pulse strength, bad idle span).
class ConstraintViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Problem size exceeds what the dense simulator supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Ansatz or schedule structure that would break slot alignment.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Unreadable or inconsistent file contents.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dqd
