#pragma once

#include <stdexcept>
#include <string>

namespace pararc {

// Precondition violated by the caller (bad degree, missing variable, ...).
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A configured bound (degree cap, node budget, iteration cap) was exceeded.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed; the message names the path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An iterative method failed to reach its tolerance.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Dynamics-specific failures raised by the fatou module.
class NotParabolicError : public NumericError {
  public:
    using NumericError::NumericError;
};

class CuspError : public NumericError {
  public:
    using NumericError::NumericError;
};

class PetalError : public NumericError {
  public:
    using NumericError::NumericError;
};

// Dimension estimation failures raised by the hausdorff module.
class BracketError : public NumericError {
  public:
    using NumericError::NumericError;
};

class DegenerateError : public NumericError {
  public:
    using NumericError::NumericError;
};

class NonIsolatedSingularityError : public DomainError {
  public:
    using DomainError::DomainError;
};

} // namespace pararc
