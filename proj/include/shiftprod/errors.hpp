#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shiftprod {

/// Operands drawn from different ground domains (rationals vs. F_q, or two
/// different moduli).
struct DomainMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Undefined arithmetic: division by zero, zero to a negative power, order of 0.
struct ArithmeticError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An operation's precondition does not hold for its input (not prime, empty
/// set, size-match policy violated, desk-scale cap exceeded, ...).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed text input. `position` is the 0-based offset of the offending
/// character in the parsed string.
struct ParseError : std::invalid_argument {
    ParseError(const std::string& what, std::size_t pos)
        : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

}  // namespace shiftprod
