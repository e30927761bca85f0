#pragma once

#include <stdexcept>

namespace jet {

/// Thrown when an algorithm fails numerically (divergence, singular
/// innovation covariance, non-convergence that cannot be recovered).
/// Contract violations (bad arguments, malformed files) throw
/// std::invalid_argument instead.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace jet
