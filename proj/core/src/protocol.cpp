#include "noisekey/protocol.hpp"

#include <cmath>

#include "noisekey/errors.hpp"

namespace noisekey {

void validate_params(const ProtocolParams& p) {
    if (!(p.sigma >= 0.0) || p.sigma >= kPi / 2)
        throw DomainError("params: noise spread must lie in [0, pi/2)");
    if (p.symbols_per_cycle < 1 || p.symbols_per_cycle > kMaxSymbolsPerCycle)
        throw ContractViolation("params: symbols per cycle must lie in [1, 2^19]");
    if (p.cycles < 1) throw ContractViolation("params: cycle count must be positive");
    if (p.digest_block_bits < 1) throw ContractViolation("params: digest block must be positive");
    if (!(p.f_retain > 0.0) || p.f_retain > 1.0)
        throw ContractViolation("params: retention factor must lie in (0, 1]");
    // Distinct reference phases must survive the 16-bit wire grid with margin.
    double quantum = kTwoPi / 65536.0;
    if (min_basis_separation(p.wheel) < kMinSeparationQuanta * quantum)
        throw ContractViolation("params: basis separation below the wire grid safety margin");
}

std::uint64_t SessionLedger::raw_total() const {
    std::uint64_t t = 0;
    for (const auto& c : cycles) t += c.raw_shared;
    return t;
}
std::uint64_t SessionLedger::distilled_total() const {
    std::uint64_t t = 0;
    for (const auto& c : cycles) t += c.distilled;
    return t;
}
std::uint64_t SessionLedger::discarded_reconciliation_total() const {
    std::uint64_t t = 0;
    for (const auto& c : cycles) t += c.discarded_reconciliation;
    return t;
}
std::uint64_t SessionLedger::discarded_privacy_total() const {
    std::uint64_t t = 0;
    for (const auto& c : cycles) t += c.discarded_privacy;
    return t;
}

double effective_retention(double f_retain, std::uint32_t cycle_index) {
    if (cycle_index < 1) throw ContractViolation("retention: cycles are 1-based");
    double r = 1.0;
    for (std::uint32_t i = 0; i < cycle_index; ++i) r *= f_retain;
    return r;
}

std::size_t amplified_length(std::size_t input_bits, double f_eff) {
    return static_cast<std::size_t>(std::floor(f_eff * static_cast<double>(input_bits)));
}

SessionLedger project_ledger(std::uint32_t symbols_per_cycle, double f_retain,
                             std::uint32_t cycles) {
    // Error-free model: every block survives, the running key stays balanced
    // (one consumed basis bit per distilled raw bit), so the only way to halt
    // is running out of seed material for the next amplification.
    SessionLedger ledger;
    for (std::uint32_t j = 1; j <= cycles; ++j) {
        std::uint64_t n = symbols_per_cycle;
        std::uint64_t m = (f_retain == 1.0)
                              ? n
                              : amplified_length(n, effective_retention(f_retain, j));
        ledger.cycles.push_back({n, m, 0, n - m});
        if (f_retain < 1.0 && j < cycles && m < kSeedBits) {
            ledger.restart_required = true;
            ledger.reason = RestartReason::KeyExhausted;
            break;
        }
    }
    return ledger;
}

Bits expand_toeplitz_seed(const Bits& seed, std::size_t length) {
    if (seed.size() != kSeedBits) throw ContractViolation("seed expansion: seed must be 64 bits");
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < kSeedBits; ++i)
        s |= static_cast<std::uint64_t>(seed[i] & 1u) << (63 - i);
    EntropySource src = EntropySource::seeded(s);
    return src.fresh_bits(length);
}

Bits toeplitz_amplify(const Bits& input, const Bits& seed, std::size_t out_len) {
    if (out_len == 0) return {};
    std::size_t n = input.size();
    if (n == 0) throw ContractViolation("amplify: empty input with nonzero output");
    if (seed.size() != n + out_len - 1)
        throw ContractViolation("amplify: seed must hold input + output - 1 bits");

    // output[i] = parity over j of input[j] * seed[i - j + n - 1]. With the
    // seed reversed, row i becomes a contiguous window of the reversed seed
    // starting at bit (out_len - 1 - i), so each row is word-wise AND/XOR.
    std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> x(words, 0);
    for (std::size_t j = 0; j < n; ++j)
        if (input[j]) x[j / 64] |= 1ull << (j % 64);

    std::size_t rlen = seed.size();
    std::vector<std::uint64_t> r(rlen / 64 + 2, 0);
    for (std::size_t t = 0; t < rlen; ++t)
        if (seed[rlen - 1 - t]) r[t / 64] |= 1ull << (t % 64);

    Bits out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        std::size_t off = out_len - 1 - i;
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::size_t bit = off + 64 * w;
            std::size_t q = bit / 64, sh = bit % 64;
            std::uint64_t rw = r[q] >> sh;
            if (sh) rw |= r[q + 1] << (64 - sh);
            acc ^= x[w] & rw;
        }
        out[i] = static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
    }
    return out;
}

std::vector<std::uint64_t> block_digests(const Bits& raw, std::uint32_t block_bits) {
    if (block_bits == 0) throw ContractViolation("digests: block size must be positive");
    std::vector<std::uint64_t> out;
    for (std::size_t start = 0; start < raw.size(); start += block_bits) {
        std::size_t stop = std::min(raw.size(), start + block_bits);
        Bits block(raw.begin() + static_cast<std::ptrdiff_t>(start),
                   raw.begin() + static_cast<std::ptrdiff_t>(stop));
        out.push_back(digest_bits(block));
    }
    return out;
}

Endpoint::Endpoint(Role role, const ProtocolParams& params, Bits k0, EntropySource entropy)
    : role_(role), params_(params), entropy_(entropy) {
    validate_params(params_);
    std::size_t basis_need =
        static_cast<std::size_t>(params_.symbols_per_cycle) * params_.wheel.bits_per_basis;
    std::size_t need = basis_need + (params_.f_retain < 1.0 ? kSeedBits : 0);
    if (k0.size() < need)
        throw ContractViolation("endpoint: initial key too short for the first cycle");
    if (params_.f_retain < 1.0) {
        next_seed_.assign(k0.end() - kSeedBits, k0.end());
        k0.resize(k0.size() - kSeedBits);
    }
    key_ = std::move(k0);
}

bool Endpoint::emits(std::uint32_t cycle) const {
    bool odd = (cycle % 2) == 1;
    return (role_ == Role::Initiator) == odd;
}

Bits Endpoint::take_key(std::size_t count) {
    if (count > key_.size() - key_consumed_)
        throw KeyExhausted("endpoint: running key has too few bits for the cycle's bases");
    Bits out(key_.begin() + static_cast<std::ptrdiff_t>(key_consumed_),
             key_.begin() + static_cast<std::ptrdiff_t>(key_consumed_ + count));
    key_consumed_ += count;
    return out;
}

void Endpoint::check_cycle(std::uint32_t cycle, Stage expected) const {
    if (stage_ == Stage::Done) throw ContractViolation("endpoint: session already finished");
    if (cycle != current_cycle_ || stage_ != expected)
        throw ContractViolation("endpoint: call out of protocol order");
}

std::vector<Phase> Endpoint::emit(std::uint32_t cycle) {
    check_cycle(cycle, Stage::AwaitSymbols);
    if (!emits(cycle)) throw ContractViolation("endpoint: not the emitter this cycle");
    std::uint32_t L = params_.symbols_per_cycle;
    std::vector<std::uint32_t> bases = bases_from_key(
        params_.wheel, take_key(static_cast<std::size_t>(L) * params_.wheel.bits_per_basis), L);
    std::vector<Phase> phases(L);
    Bits raw(L);
    for (std::uint32_t i = 0; i < L; ++i) {
        raw[i] = entropy_.fresh_bit();
        double noise = entropy_.normal(params_.sigma);
        phases[i] = encode(params_.wheel, bases[i], raw[i], noise);
    }
    raw_views_.push_back(std::move(raw));
    stage_ = Stage::AwaitReconcile;
    return phases;
}

void Endpoint::receive(std::uint32_t cycle, const std::vector<Phase>& phases) {
    check_cycle(cycle, Stage::AwaitSymbols);
    if (emits(cycle)) throw ContractViolation("endpoint: emitter cannot receive its own cycle");
    std::uint32_t L = params_.symbols_per_cycle;
    if (phases.size() != L) throw ProtocolViolation("receive: wrong symbol count");
    std::vector<std::uint32_t> bases = bases_from_key(
        params_.wheel, take_key(static_cast<std::size_t>(L) * params_.wheel.bits_per_basis), L);
    Bits raw(L);
    for (std::uint32_t i = 0; i < L; ++i) raw[i] = decode(params_.wheel, bases[i], phases[i]);
    raw_views_.push_back(std::move(raw));
    stage_ = Stage::AwaitReconcile;
}

std::vector<std::uint64_t> Endpoint::digests(std::uint32_t cycle) const {
    check_cycle(cycle, Stage::AwaitReconcile);
    return block_digests(raw_views_.back(), params_.digest_block_bits);
}

CycleLedger Endpoint::reconcile(std::uint32_t cycle, const std::vector<std::uint64_t>& peer) {
    check_cycle(cycle, Stage::AwaitReconcile);
    const Bits& raw = raw_views_.back();
    std::vector<std::uint64_t> mine = block_digests(raw, params_.digest_block_bits);
    if (peer.size() != mine.size()) throw ProtocolViolation("reconcile: digest count mismatch");

    Bits survivors;
    survivors.reserve(raw.size());
    std::uint32_t B = params_.digest_block_bits;
    for (std::size_t b = 0; b < mine.size(); ++b) {
        if (mine[b] != peer[b]) continue;
        std::size_t start = b * B;
        std::size_t stop = std::min(raw.size(), start + B);
        survivors.insert(survivors.end(), raw.begin() + static_cast<std::ptrdiff_t>(start),
                         raw.begin() + static_cast<std::ptrdiff_t>(stop));
    }

    std::size_t n = survivors.size();
    Bits distilled;
    if (params_.f_retain == 1.0) {
        distilled = survivors;
    } else {
        std::size_t m = amplified_length(n, effective_retention(params_.f_retain, cycle));
        if (m > 0) {
            if (next_seed_.empty())
                throw ContractViolation("reconcile: no seed available for amplification");
            Bits expanded = expand_toeplitz_seed(next_seed_, n + m - 1);
            distilled = toeplitz_amplify(survivors, expanded, m);
        }
    }
    std::size_t m = distilled.size();

    CycleLedger row{raw.size(), m, raw.size() - n, n - m};
    ledger_.cycles.push_back(row);

    // Verified raw bits feed the running key: they are the next cycles' bases.
    key_.insert(key_.end(), survivors.begin(), survivors.end());

    distilled_lengths_.push_back(static_cast<std::uint32_t>(m));
    distilled_digests_.push_back(digest_bits(distilled));

    if (params_.f_retain < 1.0) {
        bool more = cycle < params_.cycles;
        if (more && m >= kSeedBits) {
            // The first seed's worth of distilled bits is withheld from the
            // keystream and reserved as the next cycle's amplification seed.
            next_seed_.assign(distilled.begin(), distilled.begin() + kSeedBits);
            keystream_.insert(keystream_.end(), distilled.begin() + kSeedBits, distilled.end());
        } else {
            next_seed_.clear();
            keystream_.insert(keystream_.end(), distilled.begin(), distilled.end());
        }
    } else {
        keystream_.insert(keystream_.end(), distilled.begin(), distilled.end());
    }

    if (params_.min_distilled > 0 && m < params_.min_distilled) {
        ledger_.restart_required = true;
        ledger_.reason = RestartReason::BelowMinimum;
    } else if (cycle < params_.cycles) {
        std::size_t basis_need =
            static_cast<std::size_t>(params_.symbols_per_cycle) * params_.wheel.bits_per_basis;
        if ((params_.f_retain < 1.0 && next_seed_.empty()) || key_remaining() < basis_need) {
            ledger_.restart_required = true;
            ledger_.reason = RestartReason::KeyExhausted;
        }
    }

    if (ledger_.restart_required || cycle == params_.cycles) {
        stage_ = Stage::Done;
    } else {
        ++current_cycle_;
        stage_ = Stage::AwaitSymbols;
    }
    return row;
}

std::uint32_t Endpoint::distilled_length(std::uint32_t cycle) const {
    if (cycle < 1 || cycle > distilled_lengths_.size())
        throw ContractViolation("endpoint: cycle not reconciled yet");
    return distilled_lengths_[cycle - 1];
}

std::uint64_t Endpoint::distilled_digest(std::uint32_t cycle) const {
    if (cycle < 1 || cycle > distilled_digests_.size())
        throw ContractViolation("endpoint: cycle not reconciled yet");
    return distilled_digests_[cycle - 1];
}

const Bits& Endpoint::raw_view(std::uint32_t cycle) const {
    if (cycle < 1 || cycle > raw_views_.size())
        throw ContractViolation("endpoint: no raw view for that cycle");
    return raw_views_[cycle - 1];
}

}  // namespace noisekey
