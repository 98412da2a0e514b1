#pragma once

#include <stdexcept>
#include <string>

namespace cnl {

// Invalid or inconsistent user input (bad instance data, dimension mismatch,
// malformed files). CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Problem size exceeds the configured enumeration cap. CLI maps this to exit
// code 3 and points the user at the external-solver path.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cnl
