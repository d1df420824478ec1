#ifndef NOISEKEY_NOISE_HPP
#define NOISEKEY_NOISE_HPP

#include <cstdint>
#include <random>

#include "noisekey/bits.hpp"

namespace noisekey {

// All randomness flows through this wrapper so seeded runs are reproducible
// bit for bit across platforms. The draw discipline is part of the contract:
//   - fresh_bit() consumes exactly one engine draw (its top bit);
//   - normal() consumes exactly two draws (Box-Muller, cosine branch only,
//     no caching), except sigma == 0 which consumes none and returns 0;
//   - mt19937_64 output is bit-exact per the language standard.
class EntropySource {
  public:
    static EntropySource seeded(std::uint64_t seed);
    static EntropySource system();

    std::uint64_t next_u64();

    std::uint8_t fresh_bit();
    Bits fresh_bits(std::size_t count);

    // Gaussian phase jitter. sigma must lie in [0, pi/2): at pi/2 the noise
    // wraps into the opposite half-wheel often enough that the channel model
    // breaks down.
    double normal(double sigma);

  private:
    explicit EntropySource(std::uint64_t seed) : engine_(seed) {}
    std::mt19937_64 engine_;
};

// Phase-noise spread of a coherent pulse carrying n_mean photons on average.
// Requires n_mean > 8/pi^2 so the result stays below pi/2.
double sigma_from_photons(double n_mean);

// Spread chosen so +-sigma spans n_sigma adjacent bases of a uniform wheel
// with m bases (adjacent separation pi/m). Requires 0 < n_sigma < m/2.
double sigma_from_coverage(double n_sigma, std::uint32_t m);

// Upper-tail probability of the standard normal.
double gaussian_tail_q(double x);

// Probability that the legitimate receiver, decoding on the correct basis,
// flips a bit: the wrapped-Gaussian mass landing beyond pi/2 of the sent
// phase. Exact alias sum; sigma == 0 gives 0.
double bob_error_probability(double sigma);

}  // namespace noisekey

#endif
