#pragma once

#include <stdexcept>
#include <string>

namespace logsurf {

/// Bad user input: malformed specs, violated preconditions, rejected measures.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A measure outside the log-concave class was used without the explicit gate.
class NonLogConcaveError : public InputError {
public:
    explicit NonLogConcaveError(const std::string& what) : InputError(what) {}
};

/// Root-finding or quadrature failed to reach the requested accuracy.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace logsurf
