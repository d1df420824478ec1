#ifndef NOISEKEY_BITS_HPP
#define NOISEKEY_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace noisekey {

// One bit per element, each value 0 or 1. Kept unpacked because the protocol
// slices keys at arbitrary bit offsets.
using Bits = std::vector<std::uint8_t>;

// Packs bits MSB-first into bytes; a trailing partial byte is zero-padded low.
std::vector<std::uint8_t> pack_bits(const Bits& bits);

// Inverse of pack_bits for exactly `count` bits.
Bits unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t count);

std::string to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);

// FNV-1a, 64-bit (offset 14695981039346656037, prime 1099511628211).
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t len);
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);

// Digest of a bit block: bits are packed MSB-first, then hashed together with
// the block's bit count so blocks differing only in trailing padding differ.
std::uint64_t digest_bits(const Bits& bits);

// SplitMix64 step; used to derive role-distinct seeds from one master seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace noisekey

#endif
