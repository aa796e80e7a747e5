#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "tfus/errors.hpp"

namespace tfus {

// Little-endian scalar I/O for the binary model formats ("PCAM", "TFUS").

inline void write_u32le(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32le(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw DataError("unexpected end of binary stream reading u32");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_u64le(std::ostream& os, std::uint64_t v) {
    write_u32le(os, static_cast<std::uint32_t>(v & 0xffffffffu));
    write_u32le(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint64_t read_u64le(std::istream& is) {
    std::uint64_t lo = read_u32le(is);
    std::uint64_t hi = read_u32le(is);
    return lo | (hi << 32);
}

inline void write_f64le(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), 8);
}

inline double read_f64le(std::istream& is) {
    std::uint64_t bits;
    if (!is.read(reinterpret_cast<char*>(&bits), 8))
        throw DataError("unexpected end of binary stream reading f64");
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

inline void write_magic(std::ostream& os, const char magic[4]) { os.write(magic, 4); }

inline void expect_magic(std::istream& is, const char magic[4], const std::string& what) {
    char got[4];
    if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw DataError("bad magic bytes: not a " + what + " file");
}

// FNV-1a, used for config hashes stamped into artifacts.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 step; used to derive independent sub-seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t s = seed;
    s ^= splitmix64(a);
    std::uint64_t t = s + 0x632be59bd9b4e019ull * (b + 1);
    t ^= splitmix64(t);
    std::uint64_t u = t + 0x9e3779b97f4a7c15ull * (c + 1);
    u ^= splitmix64(u);
    return u;
}

} // namespace tfus
