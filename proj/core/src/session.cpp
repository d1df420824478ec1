#include "noisekey/session.hpp"

#include <cmath>

#include "noisekey/errors.hpp"

namespace noisekey {

std::uint64_t key_fingerprint(std::uint64_t salt, const Bits& k0) {
    std::vector<std::uint8_t> buf;
    for (int i = 7; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(salt >> (8 * i)));
    std::vector<std::uint8_t> packed = pack_bits(k0);
    buf.insert(buf.end(), packed.begin(), packed.end());
    return fnv1a64(buf);
}

HelloPayload make_hello(const ProtocolParams& params, const Bits& k0, std::uint64_t salt) {
    HelloPayload h;
    h.salt = salt;
    h.fingerprint = key_fingerprint(salt, k0);
    h.mode = static_cast<std::uint8_t>(params.wheel.mode);
    h.bits_per_basis = static_cast<std::uint8_t>(params.wheel.bits_per_basis);
    h.delta_phi1_q = quantize_phase(params.wheel.delta_phi1);
    h.sigma_q = quantize_phase(params.sigma);
    h.symbols_per_cycle = params.symbols_per_cycle;
    h.min_distilled = params.min_distilled;
    h.cycles = params.cycles;
    h.f_retain_e7 = static_cast<std::uint32_t>(std::llround(params.f_retain * 1e7));
    h.digest_block_bits = params.digest_block_bits;
    return h;
}

SeedPlan derive_seed_plan(std::uint64_t master) {
    return SeedPlan{
        splitmix64(master ^ 1), splitmix64(master ^ 2), splitmix64(master ^ 3),
        splitmix64(master ^ 4), splitmix64(master ^ 5),
    };
}

namespace {

class FrameChannel {
  public:
    FrameChannel(Link& link, std::vector<std::uint8_t>* transcript)
        : link_(link), transcript_(transcript) {}

    void send(const Frame& f) {
        std::vector<std::uint8_t> bytes = encode_frame(f);
        link_.send(bytes.data(), bytes.size());
        if (transcript_) transcript_->insert(transcript_->end(), bytes.begin(), bytes.end());
    }

    Frame recv() {
        std::vector<std::uint8_t> buf(kFrameHeaderBytes);
        link_.recv_exact(buf.data(), buf.size());
        std::uint32_t len = 0;
        for (int i = 0; i < 4; ++i) len = (len << 8) | buf[18 + i];
        if (len > kMaxPayloadBytes) throw BadLength("frame: payload length exceeds the wire cap");
        std::size_t rest = len + kFrameTagBytes;
        buf.resize(kFrameHeaderBytes + rest);
        link_.recv_exact(buf.data() + kFrameHeaderBytes, rest);
        Frame f = decode_frame(buf);
        if (transcript_) transcript_->insert(transcript_->end(), buf.begin(), buf.end());
        return f;
    }

    Frame expect(FrameType type, std::uint64_t session_id, std::uint32_t cycle) {
        Frame f = recv();
        if (f.type != type) throw ProtocolViolation("session: unexpected frame type");
        if (f.session_id != session_id) throw ProtocolViolation("session: session id mismatch");
        if (f.cycle != cycle) throw ProtocolViolation("session: cycle index mismatch");
        return f;
    }

  private:
    Link& link_;
    std::vector<std::uint8_t>* transcript_;
};

}  // namespace

SessionResult run_endpoint(Link& link, const SessionOptions& options) {
    validate_params(options.params);
    const ProtocolParams& params = options.params;

    SessionResult result;
    FrameChannel channel(link, options.record_transcript ? &result.transcript : nullptr);

    HelloPayload mine = make_hello(params, options.k0, options.salt);
    std::uint64_t sid = options.session_id;
    HelloPayload peer;
    if (options.role == Role::Initiator) {
        channel.send(Frame{FrameType::Hello, sid, 0, encode_hello(mine)});
        peer = decode_hello(channel.expect(FrameType::Hello, sid, 0).payload);
    } else {
        Frame f = channel.recv();
        if (f.type != FrameType::Hello) throw ProtocolViolation("session: expected handshake");
        if (f.cycle != 0) throw ProtocolViolation("session: handshake carries a cycle index");
        sid = f.session_id;
        peer = decode_hello(f.payload);
        channel.send(Frame{FrameType::Hello, sid, 0, encode_hello(mine)});
    }
    if (!mine.same_config(peer)) throw ConfigMismatch("session: endpoint parameter sets differ");
    if (peer.fingerprint != key_fingerprint(peer.salt, options.k0))
        throw FingerprintMismatch("session: peer holds a different initial key");
    result.session_id = sid;

    Endpoint ep(options.role, params, options.k0, options.entropy);

    for (std::uint32_t c = 1; c <= params.cycles; ++c) {
        if (ep.emits(c)) {
            std::vector<Phase> phases = ep.emit(c);
            std::vector<std::uint16_t> quanta(phases.size());
            for (std::size_t i = 0; i < phases.size(); ++i) quanta[i] = quantize_phase(phases[i]);
            channel.send(Frame{FrameType::Phases, sid, c, encode_phases(quanta)});

            std::vector<std::uint64_t> theirs =
                decode_digests(channel.expect(FrameType::Digests, sid, c).payload);
            channel.send(Frame{FrameType::Digests, sid, c, encode_digests(ep.digests(c))});
            ep.reconcile(c, theirs);

            AmplifyPayload my_amp{ep.distilled_length(c), ep.distilled_digest(c)};
            channel.send(Frame{FrameType::Amplify, sid, c, encode_amplify(my_amp)});
            AmplifyPayload peer_amp =
                decode_amplify(channel.expect(FrameType::Amplify, sid, c).payload);
            if (!(peer_amp == my_amp))
                throw ProtocolViolation("session: distilled key diverged between endpoints");
        } else {
            std::vector<std::uint16_t> quanta =
                decode_phases(channel.expect(FrameType::Phases, sid, c).payload);
            std::vector<Phase> phases(quanta.size());
            for (std::size_t i = 0; i < quanta.size(); ++i) phases[i] = dequantize_phase(quanta[i]);
            ep.receive(c, phases);

            channel.send(Frame{FrameType::Digests, sid, c, encode_digests(ep.digests(c))});
            std::vector<std::uint64_t> theirs =
                decode_digests(channel.expect(FrameType::Digests, sid, c).payload);
            ep.reconcile(c, theirs);

            AmplifyPayload peer_amp =
                decode_amplify(channel.expect(FrameType::Amplify, sid, c).payload);
            AmplifyPayload my_amp{ep.distilled_length(c), ep.distilled_digest(c)};
            if (!(peer_amp == my_amp))
                throw ProtocolViolation("session: distilled key diverged between endpoints");
            channel.send(Frame{FrameType::Amplify, sid, c, encode_amplify(my_amp)});
        }

        if (ep.ledger().restart_required) {
            const SessionLedger& led = ep.ledger();
            RestartPayload mine_rp{static_cast<std::uint8_t>(led.reason), led.raw_total(),
                                   led.distilled_total(), led.discarded_reconciliation_total(),
                                   led.discarded_privacy_total()};
            RestartPayload peer_rp;
            if (ep.emits(c)) {
                channel.send(Frame{FrameType::Restart, sid, c, encode_restart(mine_rp)});
                peer_rp = decode_restart(channel.expect(FrameType::Restart, sid, c).payload);
            } else {
                peer_rp = decode_restart(channel.expect(FrameType::Restart, sid, c).payload);
                channel.send(Frame{FrameType::Restart, sid, c, encode_restart(mine_rp)});
            }
            if (!(peer_rp == mine_rp))
                throw ProtocolViolation("session: restart state diverged between endpoints");
            break;
        }
    }

    result.keystream = ep.keystream();
    result.ledger = ep.ledger();
    for (std::uint32_t c = 1; c <= result.ledger.cycles.size(); ++c)
        result.raw_views.push_back(ep.raw_view(c));
    return result;
}

}  // namespace noisekey
