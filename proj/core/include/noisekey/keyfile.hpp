#ifndef NOISEKEY_KEYFILE_HPP
#define NOISEKEY_KEYFILE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "noisekey/bits.hpp"

namespace noisekey {

// Key container layout (binary form):
//   "NKEY" | version 0x01 | 3 reserved zero bytes | bit count u64 BE | packed bits
// Packed bits are MSB first; the final byte is zero-padded low. The hex form
// is the lowercase hex encoding of the exact binary form, optionally followed
// by ASCII whitespace. load auto-detects which form a file holds.
std::vector<std::uint8_t> encode_key_container(const Bits& bits);
Bits decode_key_container(const std::vector<std::uint8_t>& bytes);

void save_key_file(const std::string& path, const Bits& bits, bool hex);
Bits load_key_file(const std::string& path);

// Sequential consumer over a fixed pool of key bits. Offset only moves
// forward; requesting past the end throws KeyExhausted and consumes nothing.
class Keystream {
  public:
    explicit Keystream(Bits bits) : bits_(std::move(bits)) {}

    Bits take(std::size_t count);
    void skip(std::size_t count);

    std::size_t consumed() const { return offset_; }
    std::size_t remaining() const { return bits_.size() - offset_; }
    std::size_t size() const { return bits_.size(); }

  private:
    Bits bits_;
    std::size_t offset_ = 0;
};

// One-time-pad transform: byte i is XORed with 8 key bits, MSB first.
// Consumes exactly 8 * data.size() bits from the stream.
std::vector<std::uint8_t> otp_apply(const std::vector<std::uint8_t>& data, Keystream& pad);

}  // namespace noisekey

#endif
