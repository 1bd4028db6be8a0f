#pragma once

#include <stdexcept>
#include <string>

namespace sp {

// Bad caller input (non-squarefree m, non-prime p, malformed config, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured resource bound was exceeded (discriminant bound, sieve range, quadrature budget).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed: a sandwich breach, a non-integral identity, a basis bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace sp
