#include "noisekey/wire.hpp"

#include <cmath>
#include <cstring>

#include "noisekey/bits.hpp"
#include "noisekey/errors.hpp"

namespace noisekey {

namespace {

constexpr std::uint8_t kMagic[4] = {'N', 'K', 'W', 'P'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}
std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
    return v;
}
std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

bool valid_type(std::uint8_t t) {
    return t >= 1 && t <= 5;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& f) {
    if (f.payload.size() > kMaxPayloadBytes)
        throw ContractViolation("frame: payload exceeds the wire cap");
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderBytes + f.payload.size() + kFrameTagBytes);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kWireVersion);
    out.push_back(static_cast<std::uint8_t>(f.type));
    put_u64(out, f.session_id);
    put_u32(out, f.cycle);
    put_u32(out, static_cast<std::uint32_t>(f.payload.size()));
    out.insert(out.end(), f.payload.begin(), f.payload.end());
    put_u64(out, fnv1a64(out.data(), out.size()));
    return out;
}

Frame decode_frame(const std::uint8_t* data, std::size_t size, std::size_t& consumed) {
    if (size < kFrameHeaderBytes) throw BadLength("frame: truncated header");
    if (std::memcmp(data, kMagic, 4) != 0) throw BadMagic("frame: bad magic");
    if (data[4] != kWireVersion) throw BadVersion("frame: unsupported version");
    std::uint32_t len = get_u32(data + 18);
    if (len > kMaxPayloadBytes) throw BadLength("frame: payload length exceeds the wire cap");
    std::size_t total = kFrameHeaderBytes + len + kFrameTagBytes;
    if (size < total) throw BadLength("frame: truncated payload");
    std::uint64_t want = get_u64(data + kFrameHeaderBytes + len);
    std::uint64_t got = fnv1a64(data, kFrameHeaderBytes + len);
    if (want != got) throw BadTag("frame: integrity tag mismatch");
    if (!valid_type(data[5])) throw BadLength("frame: unknown type");

    Frame f;
    f.type = static_cast<FrameType>(data[5]);
    f.session_id = get_u64(data + 6);
    f.cycle = get_u32(data + 14);
    f.payload.assign(data + kFrameHeaderBytes, data + kFrameHeaderBytes + len);
    consumed = total;
    return f;
}

Frame decode_frame(const std::vector<std::uint8_t>& bytes) {
    std::size_t consumed = 0;
    Frame f = decode_frame(bytes.data(), bytes.size(), consumed);
    if (consumed != bytes.size()) throw BadLength("frame: trailing bytes");
    return f;
}

std::uint16_t quantize_phase(Phase phi) {
    double scaled = wrap_2pi(phi) / kTwoPi * 65536.0;
    return static_cast<std::uint16_t>(std::llround(scaled) & 0xFFFF);
}

Phase dequantize_phase(std::uint16_t q) {
    return kTwoPi * static_cast<double>(q) / 65536.0;
}

bool HelloPayload::same_config(const HelloPayload& o) const {
    return mode == o.mode && bits_per_basis == o.bits_per_basis &&
           delta_phi1_q == o.delta_phi1_q && sigma_q == o.sigma_q &&
           symbols_per_cycle == o.symbols_per_cycle && min_distilled == o.min_distilled &&
           cycles == o.cycles && f_retain_e7 == o.f_retain_e7 &&
           digest_block_bits == o.digest_block_bits;
}

std::vector<std::uint8_t> encode_hello(const HelloPayload& h) {
    std::vector<std::uint8_t> out;
    out.reserve(42);
    put_u64(out, h.salt);
    put_u64(out, h.fingerprint);
    out.push_back(h.mode);
    out.push_back(h.bits_per_basis);
    put_u16(out, h.delta_phi1_q);
    put_u16(out, h.sigma_q);
    put_u32(out, h.symbols_per_cycle);
    put_u32(out, h.min_distilled);
    put_u32(out, h.cycles);
    put_u32(out, h.f_retain_e7);
    put_u32(out, h.digest_block_bits);
    return out;
}

HelloPayload decode_hello(const std::vector<std::uint8_t>& p) {
    if (p.size() != 42) throw BadLength("hello: payload must be 42 bytes");
    HelloPayload h;
    h.salt = get_u64(p.data());
    h.fingerprint = get_u64(p.data() + 8);
    h.mode = p[16];
    h.bits_per_basis = p[17];
    h.delta_phi1_q = get_u16(p.data() + 18);
    h.sigma_q = get_u16(p.data() + 20);
    h.symbols_per_cycle = get_u32(p.data() + 22);
    h.min_distilled = get_u32(p.data() + 26);
    h.cycles = get_u32(p.data() + 30);
    h.f_retain_e7 = get_u32(p.data() + 34);
    h.digest_block_bits = get_u32(p.data() + 38);
    return h;
}

std::vector<std::uint8_t> encode_phases(const std::vector<std::uint16_t>& quanta) {
    if (quanta.size() > kMaxPhaseSamples)
        throw ContractViolation("phases: sample count exceeds one frame");
    std::vector<std::uint8_t> out;
    out.reserve(4 + 2 * quanta.size());
    put_u32(out, static_cast<std::uint32_t>(quanta.size()));
    for (std::uint16_t q : quanta) put_u16(out, q);
    return out;
}

std::vector<std::uint16_t> decode_phases(const std::vector<std::uint8_t>& p) {
    if (p.size() < 4) throw BadLength("phases: truncated payload");
    std::uint32_t count = get_u32(p.data());
    if (count > kMaxPhaseSamples) throw BadLength("phases: sample count exceeds one frame");
    if (p.size() != 4 + 2 * static_cast<std::size_t>(count))
        throw BadLength("phases: count disagrees with payload size");
    std::vector<std::uint16_t> out(count);
    for (std::uint32_t i = 0; i < count; ++i) out[i] = get_u16(p.data() + 4 + 2 * i);
    return out;
}

std::vector<std::uint8_t> encode_digests(const std::vector<std::uint64_t>& digests) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 8 * digests.size());
    put_u32(out, static_cast<std::uint32_t>(digests.size()));
    for (std::uint64_t d : digests) put_u64(out, d);
    return out;
}

std::vector<std::uint64_t> decode_digests(const std::vector<std::uint8_t>& p) {
    if (p.size() < 4) throw BadLength("digests: truncated payload");
    std::uint32_t count = get_u32(p.data());
    if (p.size() != 4 + 8 * static_cast<std::size_t>(count))
        throw BadLength("digests: count disagrees with payload size");
    std::vector<std::uint64_t> out(count);
    for (std::uint32_t i = 0; i < count; ++i) out[i] = get_u64(p.data() + 4 + 8 * i);
    return out;
}

std::vector<std::uint8_t> encode_amplify(const AmplifyPayload& a) {
    std::vector<std::uint8_t> out;
    out.reserve(12);
    put_u32(out, a.out_len);
    put_u64(out, a.digest);
    return out;
}

AmplifyPayload decode_amplify(const std::vector<std::uint8_t>& p) {
    if (p.size() != 12) throw BadLength("amplify: payload must be 12 bytes");
    return AmplifyPayload{get_u32(p.data()), get_u64(p.data() + 4)};
}

std::vector<std::uint8_t> encode_restart(const RestartPayload& r) {
    std::vector<std::uint8_t> out;
    out.reserve(33);
    out.push_back(r.reason);
    put_u64(out, r.raw_total);
    put_u64(out, r.distilled_total);
    put_u64(out, r.discarded_reconciliation_total);
    put_u64(out, r.discarded_privacy_total);
    return out;
}

RestartPayload decode_restart(const std::vector<std::uint8_t>& p) {
    if (p.size() != 33) throw BadLength("restart: payload must be 33 bytes");
    RestartPayload r;
    r.reason = p[0];
    r.raw_total = get_u64(p.data() + 1);
    r.distilled_total = get_u64(p.data() + 9);
    r.discarded_reconciliation_total = get_u64(p.data() + 17);
    r.discarded_privacy_total = get_u64(p.data() + 25);
    return r;
}

}  // namespace noisekey
