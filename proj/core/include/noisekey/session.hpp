#ifndef NOISEKEY_SESSION_HPP
#define NOISEKEY_SESSION_HPP

#include <cstdint>
#include <vector>

#include "noisekey/link.hpp"
#include "noisekey/protocol.hpp"
#include "noisekey/wire.hpp"

namespace noisekey {

struct SessionOptions {
    Role role = Role::Initiator;
    ProtocolParams params;
    Bits k0;
    EntropySource entropy = EntropySource::system();
    std::uint64_t session_id = 0;  // initiator's choice; the responder adopts it
    std::uint64_t salt = 0;
    bool record_transcript = true;
};

struct SessionResult {
    Bits keystream;
    SessionLedger ledger;
    // Every frame sent or received, raw bytes, in exchange order. Both sides
    // of a session record identical transcripts; this is also exactly what a
    // passive wiretap captures.
    std::vector<std::uint8_t> transcript;
    std::uint64_t session_id = 0;
    // This endpoint's raw bits per completed cycle (emitted or decoded).
    std::vector<Bits> raw_views;
};

std::uint64_t key_fingerprint(std::uint64_t salt, const Bits& k0);

HelloPayload make_hello(const ProtocolParams& params, const Bits& k0, std::uint64_t salt);

// Runs one endpoint of a key-distribution session over the given link:
// handshake, `cycles` reconciliation rounds, restart notification if the
// session halts early. Blocking; returns when the session is over.
SessionResult run_endpoint(Link& link, const SessionOptions& options);

// Deterministic per-role seed derivation from one master seed, so separate
// processes started with the same master reproduce one exact session.
struct SeedPlan {
    std::uint64_t initiator_rng;
    std::uint64_t responder_rng;
    std::uint64_t session_id;
    std::uint64_t initiator_salt;
    std::uint64_t responder_salt;
};
SeedPlan derive_seed_plan(std::uint64_t master);

}  // namespace noisekey

#endif
