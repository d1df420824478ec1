#ifndef NOISEKEY_WIRE_HPP
#define NOISEKEY_WIRE_HPP

#include <cstdint>
#include <vector>

#include "noisekey/constellation.hpp"

namespace noisekey {

// Frame layout, all integers big-endian:
//   magic "NKWP" | version 0x01 | type u8 | session id u64 | cycle u32 |
//   payload length u32 | payload | tag u64
// The tag is FNV-1a over every byte before it. Payloads are capped at 2^20
// bytes so a corrupt length field cannot trigger a huge allocation.
inline constexpr std::size_t kFrameHeaderBytes = 22;
inline constexpr std::size_t kFrameTagBytes = 8;
inline constexpr std::uint32_t kMaxPayloadBytes = 1u << 20;
inline constexpr std::uint32_t kMaxPhaseSamples = 1u << 19;
inline constexpr std::uint8_t kWireVersion = 0x01;

enum class FrameType : std::uint8_t {
    Hello = 1,
    Phases = 2,
    Digests = 3,
    Amplify = 4,
    Restart = 5,
};

struct Frame {
    FrameType type;
    std::uint64_t session_id = 0;
    std::uint32_t cycle = 0;  // 0 for the handshake
    std::vector<std::uint8_t> payload;

    bool operator==(const Frame&) const = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& f);

// Throws BadMagic / BadVersion / BadLength / BadTag. `consumed` receives the
// full frame size so a caller can walk a concatenated capture.
Frame decode_frame(const std::uint8_t* data, std::size_t size, std::size_t& consumed);
Frame decode_frame(const std::vector<std::uint8_t>& bytes);

// Phases cross the wire as 16-bit fractions of the circle: q = round(phi /
// (2*pi) * 65536) mod 65536. The grid is coarse enough to survive text round
// trips and fine enough (~1e-4 rad) to be far below any permitted basis
// separation.
std::uint16_t quantize_phase(Phase phi);
Phase dequantize_phase(std::uint16_t q);

// -- Typed payloads ---------------------------------------------------------

struct HelloPayload {
    std::uint64_t salt = 0;
    std::uint64_t fingerprint = 0;  // fnv1a64(salt BE || packed initial key)
    std::uint8_t mode = 0;          // 0 uniform, 1 sector
    std::uint8_t bits_per_basis = 1;
    std::uint16_t delta_phi1_q = 0;  // quantized basis separation
    std::uint16_t sigma_q = 0;       // quantized noise spread
    std::uint32_t symbols_per_cycle = 0;
    std::uint32_t min_distilled = 0;
    std::uint32_t cycles = 0;
    std::uint32_t f_retain_e7 = 0;  // round(f * 1e7)
    std::uint32_t digest_block_bits = 0;

    bool operator==(const HelloPayload&) const = default;
    // Equality of everything the two endpoints must agree on (not salt/print).
    bool same_config(const HelloPayload& o) const;
};

struct AmplifyPayload {
    std::uint32_t out_len = 0;
    std::uint64_t digest = 0;
    bool operator==(const AmplifyPayload&) const = default;
};

struct RestartPayload {
    std::uint8_t reason = 0;  // RestartReason numeric value
    std::uint64_t raw_total = 0;
    std::uint64_t distilled_total = 0;
    std::uint64_t discarded_reconciliation_total = 0;
    std::uint64_t discarded_privacy_total = 0;
    bool operator==(const RestartPayload&) const = default;
};

std::vector<std::uint8_t> encode_hello(const HelloPayload& h);
HelloPayload decode_hello(const std::vector<std::uint8_t>& payload);

std::vector<std::uint8_t> encode_phases(const std::vector<std::uint16_t>& quanta);
std::vector<std::uint16_t> decode_phases(const std::vector<std::uint8_t>& payload);

std::vector<std::uint8_t> encode_digests(const std::vector<std::uint64_t>& digests);
std::vector<std::uint64_t> decode_digests(const std::vector<std::uint8_t>& payload);

std::vector<std::uint8_t> encode_amplify(const AmplifyPayload& a);
AmplifyPayload decode_amplify(const std::vector<std::uint8_t>& payload);

std::vector<std::uint8_t> encode_restart(const RestartPayload& r);
RestartPayload decode_restart(const std::vector<std::uint8_t>& payload);

}  // namespace noisekey

#endif
