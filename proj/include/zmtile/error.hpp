#pragma once

#include <stdexcept>
#include <string>

namespace zmtile {

/// A precondition on caller-supplied data was violated.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured resource ceiling (modulus size, pivot count, ...) was hit.
class ResourceLimit : public std::runtime_error {
public:
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zmtile
