#pragma once

#include <stdexcept>
#include <string>

namespace sqt {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, wrong shapes, out-of-range parameters.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

class InvalidPartition : public InvalidInput {
  public:
    using InvalidInput::InvalidInput;
};

// Well-formed input that a given operation cannot handle.
class DomainError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public DomainError {
  public:
    using DomainError::DomainError;
};

class NotBipartite : public DomainError {
  public:
    using DomainError::DomainError;
};

class NotDegenerate : public DomainError {
  public:
    using DomainError::DomainError;
};

class RankExceedsDim : public DomainError {
  public:
    using DomainError::DomainError;
};

class StateTooLarge : public DomainError {
  public:
    using DomainError::DomainError;
};

} // namespace sqt
