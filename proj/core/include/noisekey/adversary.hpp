#ifndef NOISEKEY_ADVERSARY_HPP
#define NOISEKEY_ADVERSARY_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "noisekey/bits.hpp"
#include "noisekey/constellation.hpp"
#include "noisekey/noise.hpp"
#include "noisekey/protocol.hpp"
#include "noisekey/wire.hpp"

namespace noisekey {

// Matching tolerance for noise-free observations that never crossed the wire.
inline constexpr double kExactPhaseTolerance = 1e-9;
// Observations recovered from a capture sit on the 16-bit grid, at most half
// a step from the transmitted phase; one full step is a safe match window.
inline constexpr double kQuantizedPhaseTolerance = kTwoPi / 65536.0;

// Gaussian density wrapped onto the circle, truncated at +-3 turns. The
// remainder is below 1e-70 for every spread this library accepts.
double wrapped_normal_pdf(double delta, double sigma);

double binary_entropy(double p);

// P(bit = 1 | observed phase), uniform prior over bases and bits, for an
// observer who does not know the basis. sigma == 0 degenerates to indicator
// matching within `tolerance`; an observation matching nothing has no defined
// posterior and throws UndefinedLikelihood.
double eavesdropper_posterior(const WheelConfig& cfg, double sigma, Phase y,
                              double tolerance = kExactPhaseTolerance);

// Same posterior for the legitimate receiver, who knows the basis.
double receiver_posterior(const WheelConfig& cfg, double sigma, std::uint32_t basis, Phase y,
                          double tolerance = kExactPhaseTolerance);

struct MiEstimate {
    double bits = 0;
    double std_err = 0;
    std::size_t samples = 0;
};

// Mergeable accumulator for I = 1 - E[h2(posterior)]: partitions of a sample
// budget can run independently (each on its own entropy stream) and merge.
class EntropyAccumulator {
  public:
    void add(double h);
    void merge(const EntropyAccumulator& other);
    std::size_t samples() const { return n_; }
    MiEstimate estimate() const;

  private:
    std::size_t n_ = 0;
    double sum_ = 0;
    double sum_sq_ = 0;
};

// Monte Carlo over the channel: draw basis bits, payload bit, then noise for
// each sample (in that order), score the observer's posterior entropy.
void accumulate_eavesdropper_entropy(const WheelConfig& cfg, double sigma, EntropySource& src,
                                     std::size_t samples, EntropyAccumulator& acc);
void accumulate_receiver_entropy(const WheelConfig& cfg, double sigma, EntropySource& src,
                                 std::size_t samples, EntropyAccumulator& acc);

MiEstimate mutual_information_eavesdropper(const WheelConfig& cfg, double sigma,
                                           EntropySource& src, std::size_t samples);
MiEstimate mutual_information_receiver(const WheelConfig& cfg, double sigma, EntropySource& src,
                                       std::size_t samples);

// Work factor of brute force against a uniform wheel whose noise covers
// n_sigma adjacent bases (n_sigma a power of two >= 2): the attacker pays
// 2^k0_len keys times (log2 n_sigma)! block orderings times n_sigma offsets.
boost::multiprecision::cpp_int brute_force_count_uniform(std::uint32_t k0_len,
                                                         std::uint32_t n_sigma);

// Sector wheels leave only the two-fold bit ambiguity per key: 2 * 2^k0_len.
boost::multiprecision::cpp_int brute_force_count_sector(std::uint32_t k0_len);

// Emits the same symbol `count` times with fresh noise each time, full
// precision (no wire quantization): models an observer provoking repeats.
std::vector<Phase> repeat_probe(const WheelConfig& cfg, double sigma, std::uint32_t basis,
                                std::uint8_t bit, EntropySource& src, std::size_t count);

// -- Passive capture replay --------------------------------------------------

struct TapCycle {
    std::uint32_t cycle = 0;
    std::vector<std::uint16_t> phase_quanta;
    std::vector<std::uint64_t> digests_receiver;
    std::vector<std::uint64_t> digests_emitter;
    AmplifyPayload amplify_emitter;
    AmplifyPayload amplify_receiver;
};

struct Tap {
    HelloPayload hello_initiator;
    HelloPayload hello_responder;
    std::uint64_t session_id = 0;
    std::vector<TapCycle> cycles;
    bool restarted = false;
    RestartPayload restart_emitter;
    RestartPayload restart_receiver;
};

// Splits a raw frame capture back into the session's exchange. The fixed
// turn order makes every frame's sender unambiguous from position alone.
Tap parse_tap(const std::vector<std::uint8_t>& bytes);

ProtocolParams params_from_hello(const HelloPayload& h);

struct ReplayResult {
    // False when sigma == 0 and some observation is impossible under the key.
    bool consistent = true;
    // Sum over all captured symbols of log p(observation | candidate key),
    // the basis-conditional two-component mixture. -inf when inconsistent;
    // 0 by convention for a consistent noise-free replay.
    double log_likelihood = 0;
    Bits keystream;
    std::vector<Bits> raw_views;
};

// Runs the whole session as the endpoints would have, driven by the captured
// phases and the public digest agreement pattern, under a candidate initial
// key. With the true key and a noise-free channel this reproduces the
// endpoints' keystream bit for bit.
ReplayResult replay_tap(const Tap& tap, const Bits& k0,
                        double tolerance = kQuantizedPhaseTolerance);

inline constexpr std::uint32_t kMaxAttackKeyBits = 20;

struct AttackReport {
    std::uint32_t k0_len = 0;
    std::uint64_t candidates = 0;
    std::uint64_t consistent = 0;
    std::uint64_t best_candidate = 0;  // key bits packed MSB-first into the low end
    double best_log_likelihood = 0;
    double posterior_entropy_bits = 0;
    bool has_truth = false;
    std::uint64_t true_rank = 0;  // 1 + number of candidates strictly more likely
    double true_log_likelihood = 0;
    Bits recovered_keystream;     // what the best candidate implies
};

// Scores every 2^k0_len candidate initial key against a capture. Guarded by
// kMaxAttackKeyBits; pass the true key to have it ranked.
AttackReport exhaustive_attack(const Tap& tap, std::uint32_t k0_len,
                               const Bits* true_k0 = nullptr);

}  // namespace noisekey

#endif
