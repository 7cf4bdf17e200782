#pragma once

#include <stdexcept>

namespace twqkd {

/// Cloner noise pair violates the uncertainty bound sigma1^2 * sigma2^2 >= 1/4.
class UncertaintyViolationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An estimator was asked to run on fewer samples than it needs.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem / serialization failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace twqkd
