#include "noisekey/noise.hpp"

#include <cmath>

#include "noisekey/constellation.hpp"
#include "noisekey/errors.hpp"

namespace noisekey {

EntropySource EntropySource::seeded(std::uint64_t seed) {
    return EntropySource(seed);
}

EntropySource EntropySource::system() {
    std::random_device rd;
    std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return EntropySource(seed);
}

std::uint64_t EntropySource::next_u64() {
    return engine_();
}

std::uint8_t EntropySource::fresh_bit() {
    return static_cast<std::uint8_t>(engine_() >> 63);
}

Bits EntropySource::fresh_bits(std::size_t count) {
    Bits out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = fresh_bit();
    return out;
}

double EntropySource::normal(double sigma) {
    if (!(sigma >= 0.0) || sigma >= kPi / 2)
        throw DomainError("phase noise spread must lie in [0, pi/2)");
    if (sigma == 0.0) return 0.0;
    // Box-Muller, cosine branch. u1 is mapped into (0, 1] so log(u1) is finite;
    // u2 into [0, 1). Exactly two engine draws per sample, nothing cached.
    std::uint64_t x1 = engine_();
    std::uint64_t x2 = engine_();
    double u1 = 1.0 - static_cast<double>(x1 >> 11) * 0x1.0p-53;
    double u2 = static_cast<double>(x2 >> 11) * 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    return sigma * z;
}

double sigma_from_photons(double n_mean) {
    if (!(n_mean > 8.0 / (kPi * kPi)))
        throw DomainError("mean photon number too small: spread would reach pi/2");
    return std::sqrt(2.0 / n_mean);
}

double sigma_from_coverage(double n_sigma, std::uint32_t m) {
    if (m < 2) throw ContractViolation("coverage: wheel must have at least 2 bases");
    if (!(n_sigma > 0.0) || !(n_sigma < m / 2.0))
        throw DomainError("coverage must lie in (0, m/2)");
    return kPi * n_sigma / m;
}

double gaussian_tail_q(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double bob_error_probability(double sigma) {
    if (!(sigma >= 0.0) || sigma >= kPi / 2)
        throw DomainError("phase noise spread must lie in [0, pi/2)");
    if (sigma == 0.0) return 0.0;
    // Error mass = sum over wrap images of the Gaussian landing in
    // (pi/2 + 2*pi*j, 3*pi/2 + 2*pi*j), both tails. Four images suffice:
    // sigma < pi/2 makes the j = 4 term smaller than 1e-18.
    double p = 0.0;
    for (int j = 0; j < 4; ++j) {
        double lo = (kPi / 2 + kTwoPi * j) / sigma;
        double hi = (3 * kPi / 2 + kTwoPi * j) / sigma;
        p += gaussian_tail_q(lo) - gaussian_tail_q(hi);
    }
    return 2.0 * p;
}

}  // namespace noisekey
