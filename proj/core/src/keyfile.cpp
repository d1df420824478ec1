#include "noisekey/keyfile.hpp"

#include <cctype>
#include <fstream>

#include "noisekey/errors.hpp"

namespace noisekey {

namespace {
constexpr std::uint8_t kMagic[4] = {'N', 'K', 'E', 'Y'};
constexpr std::uint8_t kVersion = 0x01;
}  // namespace

std::vector<std::uint8_t> encode_key_container(const Bits& bits) {
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> packed = pack_bits(bits);
    out.reserve(16 + packed.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.insert(out.end(), 3, 0);
    std::uint64_t n = bits.size();
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

Bits decode_key_container(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16 || !std::equal(kMagic, kMagic + 4, bytes.begin()))
        throw ContractViolation("key container: bad magic");
    if (bytes[4] != kVersion) throw ContractViolation("key container: unsupported version");
    if (bytes[5] || bytes[6] || bytes[7])
        throw ContractViolation("key container: reserved bytes must be zero");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n = (n << 8) | bytes[8 + i];
    if (bytes.size() != 16 + (n + 7) / 8)
        throw ContractViolation("key container: length field disagrees with file size");
    std::vector<std::uint8_t> packed(bytes.begin() + 16, bytes.end());
    Bits bits = unpack_bits(packed, n);
    return bits;
}

void save_key_file(const std::string& path, const Bits& bits, bool hex) {
    std::vector<std::uint8_t> body = encode_key_container(bits);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ContractViolation("key file: cannot open for writing: " + path);
    if (hex) {
        std::string text = to_hex(body);
        text.push_back('\n');
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
    } else {
        out.write(reinterpret_cast<const char*>(body.data()),
                  static_cast<std::streamsize>(body.size()));
    }
    if (!out) throw ContractViolation("key file: write failed: " + path);
}

Bits load_key_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContractViolation("key file: cannot open: " + path);
    std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (raw.size() >= 4 && std::equal(kMagic, kMagic + 4, raw.begin()))
        return decode_key_container(raw);
    // Hex form: strip whitespace, then decode.
    std::string text;
    text.reserve(raw.size());
    for (std::uint8_t c : raw)
        if (!std::isspace(c)) text.push_back(static_cast<char>(c));
    return decode_key_container(from_hex(text));
}

Bits Keystream::take(std::size_t count) {
    if (count > remaining()) throw KeyExhausted("keystream: not enough unconsumed bits");
    Bits out(bits_.begin() + static_cast<std::ptrdiff_t>(offset_),
             bits_.begin() + static_cast<std::ptrdiff_t>(offset_ + count));
    offset_ += count;
    return out;
}

void Keystream::skip(std::size_t count) {
    if (count > remaining()) throw KeyExhausted("keystream: not enough unconsumed bits");
    offset_ += count;
}

std::vector<std::uint8_t> otp_apply(const std::vector<std::uint8_t>& data, Keystream& pad) {
    if (data.size() * 8 > pad.remaining())
        throw KeyExhausted("one-time pad: not enough key bits for payload");
    std::vector<std::uint8_t> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        Bits k = pad.take(8);
        std::uint8_t mask = 0;
        for (int j = 0; j < 8; ++j) mask = static_cast<std::uint8_t>((mask << 1) | k[j]);
        out[i] = data[i] ^ mask;
    }
    return out;
}

}  // namespace noisekey
