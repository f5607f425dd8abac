#pragma once

#include <stdexcept>
#include <string>

namespace edgeseg {

// Caller violated a precondition (shape mismatch, bad argument, missing region).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File was readable but its content is not something we support.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric input outside the domain of the operation (empty mask, zero variance...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace edgeseg
