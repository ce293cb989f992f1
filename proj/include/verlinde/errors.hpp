#pragma once

#include <stdexcept>
#include <string>

namespace verlinde {

/// A computation would exceed a configured size limit.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Verlinde sum did not round to an integer within tolerance.
struct IntegralityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mathematical identity that must hold was found violated.
struct IdentityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cache file unreadable, corrupt or from another format version.
struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace verlinde
