#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "dualmeissner/errors.hpp"

namespace dm {

// FNV-1a, 64 bit. Fast, dependency-free, and good enough to catch file
// truncation and bit rot; not a cryptographic hash.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

class Fnv1a64 {
  public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= kFnvPrime;
        }
    }

    std::uint64_t value() const { return state_; }

  private:
    std::uint64_t state_ = kFnvOffsetBasis;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    Fnv1a64 h;
    h.update(data, n);
    return h.value();
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

inline std::uint64_t digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for digest");
    Fnv1a64 h;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    if (in.bad()) throw IoError("read failure while digesting '" + path + "'");
    return h.value();
}

inline std::string digest_hex(std::uint64_t d) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    return buf;
}

}  // namespace dm
