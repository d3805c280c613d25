#pragma once

#include <stdexcept>
#include <string>

namespace dqsim {

/// Bad argument, shape mismatch or malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An integration or truncation check tripped during a run.
class NumericalAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dqsim
