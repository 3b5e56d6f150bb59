#pragma once

#include <stdexcept>
#include <string>

namespace relqi
{

/// Bad caller input: malformed vectors, wrong mass, unknown modes.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the representable range (e.g. rapidity beyond the cap).
class RangeError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

/// Valid input that hits a numerical wall.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class TruncationError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class UnsupportedMapError : public ValidationError
{
public:
    using ValidationError::ValidationError;
};

}  // namespace relqi
