#pragma once

#include <stdexcept>
#include <string>

namespace wecs {

// Bad input or configuration. The message names the offending parameter or key.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integration blew up, or an iterative solve failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wecs
