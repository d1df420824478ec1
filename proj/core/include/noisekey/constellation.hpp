#ifndef NOISEKEY_CONSTELLATION_HPP
#define NOISEKEY_CONSTELLATION_HPP

#include <cstdint>
#include <vector>

#include "noisekey/bits.hpp"

namespace noisekey {

// Angles are radians. Canonical range for stored phases is [0, 2*pi).
using Phase = double;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduces x into [0, 2*pi). Total for all finite x.
Phase wrap_2pi(Phase x);

// Reduces x into (-pi, pi]. wrap_signed(pi) == pi, wrap_signed(-pi) == pi.
Phase wrap_signed(Phase x);

enum class WheelMode : std::uint8_t {
    Uniform = 0,  // M bases evenly spread, adjacent separation pi/M
    Sector = 1,   // two bases separated by a small angle delta_phi1
};

// Immutable description of the phase wheel shared by both endpoints.
// Construct only through uniform() / sector(); members are plain so the
// struct stays trivially copyable for the handshake.
struct WheelConfig {
    WheelMode mode;
    std::uint32_t basis_count;   // M; 2 in sector mode
    std::uint32_t bits_per_basis;  // log2(M); key bits consumed per symbol
    double delta_phi1;           // sector separation; pi/M in uniform mode

    // M must be a power of two, 2 <= M <= 65536.
    static WheelConfig uniform(std::uint32_t m);

    // delta in [0, pi/2). Zero is degenerate (both bases coincide mod pi)
    // and is accepted for calibration runs only.
    static WheelConfig sector(double delta);

    bool operator==(const WheelConfig&) const = default;
};

// Interprets block (MSB first) as the basis index. block.size() must equal
// bits_per_basis and the result is < basis_count by construction.
std::uint32_t basis_index(const WheelConfig& cfg, const Bits& block);

// Reference phase of basis k: odd indices live on the opposite half-wheel
// so the bit displacement (pi) never collides with a neighbouring basis.
Phase basis_phase(const WheelConfig& cfg, std::uint32_t k);

// Transmitted phase: basis reference, plus pi when bit = 1, plus phase noise.
Phase encode(const WheelConfig& cfg, std::uint32_t k, std::uint8_t bit, double noise);

// Hard decision given the correct basis: the half-wheel nearer the reference
// phase decodes as 0. Exact boundary |d| == pi/2 decodes as 0.
std::uint8_t decode(const WheelConfig& cfg, std::uint32_t k, Phase y);

// Splits key into count blocks of bits_per_basis bits and maps each to an
// index. key.size() must be exactly count * bits_per_basis.
std::vector<std::uint32_t> bases_from_key(const WheelConfig& cfg, const Bits& key,
                                          std::size_t count);

// Smallest angular separation between distinct reference phases taken mod pi.
// Governs both eavesdropper ambiguity and wire quantization safety.
double min_basis_separation(const WheelConfig& cfg);

}  // namespace noisekey

#endif
