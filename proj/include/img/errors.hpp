#ifndef IMG_ERRORS_HPP
#define IMG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace img {

/// Bad input: malformed value, level mismatch, out-of-range index.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured cap (group size, level, factoring budget) was exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed object contradicts a structural claim it is supposed to satisfy
/// (model not closed, discriminant not of the expected shape, observation
/// outside the model). These are never silently ignored.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelConstructionError : public VerificationFailure {
 public:
  using VerificationFailure::VerificationFailure;
};

class ShapeViolation : public VerificationFailure {
 public:
  using VerificationFailure::VerificationFailure;
};

class ModelInconsistency : public VerificationFailure {
 public:
  using VerificationFailure::VerificationFailure;
};

/// Base point in the postcritical set {0, 2}.
class ExcludedBasePoint : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class BadPrime : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace img

#endif  // IMG_ERRORS_HPP
