#pragma once

#include <stdexcept>
#include <string>

namespace lca {

/// Malformed or inconsistent input (schema errors, parent mismatch, bad parameters).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mathematical hypothesis of an operation does not hold for the given data.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lca
