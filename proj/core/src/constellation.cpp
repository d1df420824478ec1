#include "noisekey/constellation.hpp"

#include <cmath>

#include "noisekey/errors.hpp"

namespace noisekey {

Phase wrap_2pi(Phase x) {
    double r = x - kTwoPi * std::floor(x / kTwoPi);
    // floor() rounding can land exactly on 2*pi or just below 0 for huge |x|.
    if (r >= kTwoPi) r -= kTwoPi;
    if (r < 0.0) r = 0.0;
    return r;
}

Phase wrap_signed(Phase x) {
    return kPi - wrap_2pi(kPi - x);
}

WheelConfig WheelConfig::uniform(std::uint32_t m) {
    if (m < 2 || m > 65536 || (m & (m - 1)) != 0)
        throw ContractViolation("uniform wheel: basis count must be a power of two in [2, 65536]");
    std::uint32_t bits = 0;
    for (std::uint32_t v = m; v > 1; v >>= 1) ++bits;
    return WheelConfig{WheelMode::Uniform, m, bits, kPi / m};
}

WheelConfig WheelConfig::sector(double delta) {
    if (!(delta >= 0.0) || delta >= kPi / 2)
        throw ContractViolation("sector wheel: separation must lie in [0, pi/2)");
    return WheelConfig{WheelMode::Sector, 2, 1, delta};
}

std::uint32_t basis_index(const WheelConfig& cfg, const Bits& block) {
    if (block.size() != cfg.bits_per_basis)
        throw ContractViolation("basis_index: block length != bits per basis");
    std::uint32_t k = 0;
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (block[i] > 1) throw ContractViolation("basis_index: element is not 0 or 1");
        k |= static_cast<std::uint32_t>(block[i]) << (cfg.bits_per_basis - 1 - i);
    }
    return k;
}

Phase basis_phase(const WheelConfig& cfg, std::uint32_t k) {
    if (k >= cfg.basis_count) throw ContractViolation("basis_phase: index out of range");
    double odd_shift = (k & 1u) ? kPi : 0.0;
    if (cfg.mode == WheelMode::Uniform)
        return wrap_2pi(kPi * static_cast<double>(k) / cfg.basis_count + odd_shift);
    return wrap_2pi(static_cast<double>(k) * cfg.delta_phi1 + odd_shift);
}

Phase encode(const WheelConfig& cfg, std::uint32_t k, std::uint8_t bit, double noise) {
    if (bit > 1) throw ContractViolation("encode: bit is not 0 or 1");
    return wrap_2pi(basis_phase(cfg, k) + (bit ? kPi : 0.0) + noise);
}

std::uint8_t decode(const WheelConfig& cfg, std::uint32_t k, Phase y) {
    double d = wrap_signed(y - basis_phase(cfg, k));
    return std::abs(d) <= kPi / 2 ? 0 : 1;
}

std::vector<std::uint32_t> bases_from_key(const WheelConfig& cfg, const Bits& key,
                                          std::size_t count) {
    if (key.size() != count * cfg.bits_per_basis)
        throw ContractViolation("bases_from_key: key length != count * bits per basis");
    std::vector<std::uint32_t> out(count);
    Bits block(cfg.bits_per_basis);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < block.size(); ++j)
            block[j] = key[i * cfg.bits_per_basis + j];
        out[i] = basis_index(cfg, block);
    }
    return out;
}

double min_basis_separation(const WheelConfig& cfg) {
    if (cfg.mode == WheelMode::Uniform) return kPi / cfg.basis_count;
    return cfg.delta_phi1;
}

}  // namespace noisekey
