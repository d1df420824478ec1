#include "noisekey/bits.hpp"

#include <stdexcept>

#include "noisekey/errors.hpp"

namespace noisekey {

std::vector<std::uint8_t> pack_bits(const Bits& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw ContractViolation("pack_bits: element is not 0 or 1");
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
}

Bits unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t count) {
    if (count > bytes.size() * 8) throw ContractViolation("unpack_bits: count exceeds input");
    Bits out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    }
    return out;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

namespace {
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw ContractViolation("from_hex: odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ContractViolation("from_hex: non-hex character");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
    return fnv1a64(bytes.data(), bytes.size());
}

std::uint64_t digest_bits(const Bits& bits) {
    std::vector<std::uint8_t> packed = pack_bits(bits);
    std::uint64_t n = bits.size();
    // Append the bit count big-endian so "10" and "100" (same packed bytes) differ.
    for (int i = 7; i >= 0; --i) packed.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    return fnv1a64(packed);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace noisekey
