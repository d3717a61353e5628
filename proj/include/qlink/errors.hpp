#pragma once

#include <stdexcept>
#include <string>

namespace qlink {

// Numerical failure (quadrature did not converge, optimizer saw a flat
// objective, ...). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or input; carries the offending key path when it
// comes from a config file. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qlink
