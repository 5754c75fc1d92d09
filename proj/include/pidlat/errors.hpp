#pragma once

#include <stdexcept>
#include <string>

namespace pidlat {

// Bad user input: malformed files, unknown variables, broken preconditions.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds the supported size envelope (source count, free bits, ...).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant; should be unreachable.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace pidlat
