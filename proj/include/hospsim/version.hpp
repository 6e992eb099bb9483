#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hospsim {

inline constexpr const char* kToolName = "hospsim";
inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a 64-bit hash, used to fingerprint config files in reports.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value);

} // namespace hospsim
