#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace uqline {

inline constexpr std::uint64_t fnv1a64_seed = 0xcbf29ce484222325ull;

// FNV-1a, 64 bit (http://www.isthe.com/chongo/tech/comp/fnv/)
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = fnv1a64_seed) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string to_hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf, 16);
}

}  // namespace uqline
