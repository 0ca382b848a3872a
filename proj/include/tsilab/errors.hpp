#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tsilab {

// Exit-code contract: 0 ok, 2 input, 3 resource/budget, 4 internal invariant.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    std::string kind;       // "nodes", "index", "window", ...
    std::uint64_t needed;   // budget that would have been required, 0 if unknown
    resource_error(std::string k, std::uint64_t n, const std::string& what)
        : std::runtime_error(what), kind(std::move(k)), needed(n) {}
};

struct integrity_error : std::runtime_error {
    explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsilab
