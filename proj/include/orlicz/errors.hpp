#pragma once

#include <stdexcept>

namespace orlicz {

// Error taxonomy mirrored by the CLI exit-code contract:
// a failed inequality is exit 1, a bad config is exit 2.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace orlicz
