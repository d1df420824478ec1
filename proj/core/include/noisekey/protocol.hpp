#ifndef NOISEKEY_PROTOCOL_HPP
#define NOISEKEY_PROTOCOL_HPP

#include <cstdint>
#include <vector>

#include "noisekey/bits.hpp"
#include "noisekey/constellation.hpp"
#include "noisekey/noise.hpp"

namespace noisekey {

// Both endpoints must run the exact same parameter set; the handshake
// rejects any difference.
struct ProtocolParams {
    WheelConfig wheel;
    double sigma = 0.1;                 // channel phase noise spread
    std::uint32_t symbols_per_cycle = 1000;  // L
    std::uint32_t min_distilled = 0;    // per-cycle floor; 0 disables the check
    std::uint32_t cycles = 10;
    double f_retain = 0.9991;           // per-cycle privacy retention factor
    std::uint32_t digest_block_bits = 64;
};

// Throws ContractViolation / DomainError when a session could not run:
// separations below the wire grid's safe margin, L over one frame's capacity,
// f outside (0, 1], and so on.
void validate_params(const ProtocolParams& p);

// Phases cross the wire as 16-bit fractions of the full circle, so distinct
// reference phases must sit at least this many grid steps apart.
inline constexpr std::uint32_t kMinSeparationQuanta = 64;
// One PHASES frame carries a whole cycle, capping L.
inline constexpr std::uint32_t kMaxSymbolsPerCycle = 1u << 19;
// Toeplitz seeds are fixed-size slices of secret key material.
inline constexpr std::uint32_t kSeedBits = 64;

enum class Role : std::uint8_t { Initiator = 0, Responder = 1 };

enum class RestartReason : std::uint8_t {
    None = 0,
    BelowMinimum = 1,  // a cycle distilled fewer than min_distilled bits
    KeyExhausted = 2,  // not enough key material to run the next cycle
};

// Per-cycle accounting. The four counters partition the cycle's raw bits
// exactly: raw_shared = distilled + discarded_reconciliation + discarded_privacy.
struct CycleLedger {
    std::uint64_t raw_shared = 0;
    std::uint64_t distilled = 0;
    std::uint64_t discarded_reconciliation = 0;
    std::uint64_t discarded_privacy = 0;
};

struct SessionLedger {
    std::vector<CycleLedger> cycles;
    bool restart_required = false;
    RestartReason reason = RestartReason::None;

    std::uint64_t raw_total() const;
    std::uint64_t distilled_total() const;
    std::uint64_t discarded_reconciliation_total() const;
    std::uint64_t discarded_privacy_total() const;
};

// Arithmetic model of an error-free session: every block survives, so cycle j
// distills floor(f^j * L) bits. Used as a cross-check against live runs.
SessionLedger project_ledger(std::uint32_t symbols_per_cycle, double f_retain,
                             std::uint32_t cycles);

// f^j compounded by repeated IEEE multiplication. Both endpoints must get the
// same double, so the loop is the contract; pow() is not.
double effective_retention(double f_retain, std::uint32_t cycle_index);

// floor(f_eff * n)
std::size_t amplified_length(std::size_t input_bits, double f_eff);

// Stretches a 64-bit secret seed into `length` Toeplitz bits. The expansion
// is the top bit of successive mt19937_64 draws seeded with the 64 bits read
// MSB first.
Bits expand_toeplitz_seed(const Bits& seed, std::size_t length);

// Multiplies by the Toeplitz matrix T[i][j] = seed[i - j + n - 1] over GF(2),
// n = input size, output rows 0..out_len-1. seed must hold n + out_len - 1
// bits. out_len = 0 returns empty.
Bits toeplitz_amplify(const Bits& input, const Bits& seed, std::size_t out_len);

// FNV-1a digests of the cycle's raw bits split into digest_block_bits blocks,
// trailing short block allowed.
std::vector<std::uint64_t> block_digests(const Bits& raw, std::uint32_t block_bits);

// One endpoint's protocol state, independent of any transport. A driver
// (in-process pair, frame loop, attack replay) sequences the calls:
//   emitter:  emit -> digests -> reconcile
//   receiver: receive -> digests -> reconcile
// Cycles are 1-based; the initiator emits odd cycles.
class Endpoint {
  public:
    // k0 must cover the first cycle's basis bits, plus the first Toeplitz
    // seed (its last kSeedBits bits) when f_retain < 1.
    Endpoint(Role role, const ProtocolParams& params, Bits k0, EntropySource entropy);

    bool emits(std::uint32_t cycle) const;

    // Consumes L * bits_per_basis key bits, draws L payload bits and L noise
    // samples (bit before noise, per symbol), returns the transmitted phases.
    std::vector<Phase> emit(std::uint32_t cycle);

    // Receiver path: consumes the same key bits, decodes the given phases.
    void receive(std::uint32_t cycle, const std::vector<Phase>& phases);

    // Digests of this endpoint's view of the cycle's raw bits.
    std::vector<std::uint64_t> digests(std::uint32_t cycle) const;

    // Keeps the blocks whose digests agree, privacy-amplifies the survivors,
    // appends survivors to the running key and distilled bits to the
    // keystream. Sets the ledger's restart flag when the session cannot
    // continue. Returns this cycle's ledger row.
    CycleLedger reconcile(std::uint32_t cycle, const std::vector<std::uint64_t>& peer_digests);

    // Cross-check values exchanged after reconciliation.
    std::uint32_t distilled_length(std::uint32_t cycle) const;
    std::uint64_t distilled_digest(std::uint32_t cycle) const;

    const Bits& keystream() const { return keystream_; }
    const SessionLedger& ledger() const { return ledger_; }
    // This endpoint's raw view of a finished cycle (diagnostics; an
    // in-process harness compares the two views to measure the channel).
    const Bits& raw_view(std::uint32_t cycle) const;
    std::size_t key_remaining() const { return key_.size() - key_consumed_; }

  private:
    enum class Stage { AwaitSymbols, AwaitReconcile, Done };

    Bits take_key(std::size_t count);
    void check_cycle(std::uint32_t cycle, Stage expected) const;

    Role role_;
    ProtocolParams params_;
    EntropySource entropy_;
    Bits key_;                    // shared running key; bases are read from here
    std::size_t key_consumed_ = 0;
    Bits next_seed_;              // kSeedBits bits, set when f_retain < 1
    Bits keystream_;
    SessionLedger ledger_;
    std::uint32_t current_cycle_ = 1;
    Stage stage_ = Stage::AwaitSymbols;
    std::vector<Bits> raw_views_;          // per finished or in-flight cycle
    std::vector<std::uint32_t> distilled_lengths_;
    std::vector<std::uint64_t> distilled_digests_;
};

}  // namespace noisekey

#endif
