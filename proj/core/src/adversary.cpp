#include "noisekey/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "noisekey/errors.hpp"

namespace noisekey {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double wrapped_normal_pdf(double delta, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("wrapped density: spread must be positive");
    double d = wrap_signed(delta);
    double inv = 1.0 / (sigma * std::sqrt(kTwoPi));
    double sum = 0.0;
    for (int w = -3; w <= 3; ++w) {
        double u = (d - kTwoPi * w) / sigma;
        sum += std::exp(-0.5 * u * u);
    }
    return inv * sum;
}

double binary_entropy(double p) {
    if (!(p >= 0.0) || p > 1.0) throw DomainError("binary entropy: p outside [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double eavesdropper_posterior(const WheelConfig& cfg, double sigma, Phase y, double tolerance) {
    double num = 0.0, denom = 0.0;
    if (sigma > 0.0) {
        for (std::uint32_t k = 0; k < cfg.basis_count; ++k) {
            Phase ref = basis_phase(cfg, k);
            for (int b = 0; b <= 1; ++b) {
                double t = wrapped_normal_pdf(y - ref - (b ? kPi : 0.0), sigma);
                denom += t;
                if (b) num += t;
            }
        }
        if (denom <= 0.0) throw UndefinedLikelihood("posterior: observation has zero density");
        return num / denom;
    }
    for (std::uint32_t k = 0; k < cfg.basis_count; ++k) {
        Phase ref = basis_phase(cfg, k);
        for (int b = 0; b <= 1; ++b) {
            if (std::abs(wrap_signed(y - ref - (b ? kPi : 0.0))) <= tolerance) {
                denom += 1.0;
                if (b) num += 1.0;
            }
        }
    }
    if (denom == 0.0)
        throw UndefinedLikelihood("posterior: noise-free observation matches no signal point");
    return num / denom;
}

double receiver_posterior(const WheelConfig& cfg, double sigma, std::uint32_t basis, Phase y,
                          double tolerance) {
    Phase ref = basis_phase(cfg, basis);
    if (sigma > 0.0) {
        double p0 = wrapped_normal_pdf(y - ref, sigma);
        double p1 = wrapped_normal_pdf(y - ref - kPi, sigma);
        if (p0 + p1 <= 0.0) throw UndefinedLikelihood("posterior: observation has zero density");
        return p1 / (p0 + p1);
    }
    bool m0 = std::abs(wrap_signed(y - ref)) <= tolerance;
    bool m1 = std::abs(wrap_signed(y - ref - kPi)) <= tolerance;
    if (!m0 && !m1)
        throw UndefinedLikelihood("posterior: noise-free observation matches no signal point");
    if (m0 && m1) return 0.5;
    return m1 ? 1.0 : 0.0;
}

void EntropyAccumulator::add(double h) {
    ++n_;
    sum_ += h;
    sum_sq_ += h * h;
}

void EntropyAccumulator::merge(const EntropyAccumulator& other) {
    n_ += other.n_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
}

MiEstimate EntropyAccumulator::estimate() const {
    if (n_ == 0) throw ContractViolation("information estimate: no samples accumulated");
    double n = static_cast<double>(n_);
    double mean = sum_ / n;
    MiEstimate e;
    e.bits = 1.0 - mean;
    e.samples = n_;
    if (n_ > 1) {
        // Sample variance of the entropy scores; rounding can push it barely
        // negative when every score is identical, hence the clamp.
        double var = (sum_sq_ - n * mean * mean) / (n - 1.0);
        e.std_err = std::sqrt(std::max(0.0, var) / n);
    }
    return e;
}

namespace {

template <typename Posterior>
void accumulate_entropy(const WheelConfig& cfg, double sigma, EntropySource& src,
                        std::size_t samples, EntropyAccumulator& acc, Posterior posterior) {
    for (std::size_t s = 0; s < samples; ++s) {
        Bits kb = src.fresh_bits(cfg.bits_per_basis);
        std::uint32_t k = basis_index(cfg, kb);
        std::uint8_t bit = src.fresh_bit();
        double noise = src.normal(sigma);
        Phase y = encode(cfg, k, bit, noise);
        acc.add(binary_entropy(posterior(k, y)));
    }
}

}  // namespace

void accumulate_eavesdropper_entropy(const WheelConfig& cfg, double sigma, EntropySource& src,
                                     std::size_t samples, EntropyAccumulator& acc) {
    accumulate_entropy(cfg, sigma, src, samples, acc, [&](std::uint32_t, Phase y) {
        return eavesdropper_posterior(cfg, sigma, y);
    });
}

void accumulate_receiver_entropy(const WheelConfig& cfg, double sigma, EntropySource& src,
                                 std::size_t samples, EntropyAccumulator& acc) {
    accumulate_entropy(cfg, sigma, src, samples, acc, [&](std::uint32_t k, Phase y) {
        return receiver_posterior(cfg, sigma, k, y);
    });
}

MiEstimate mutual_information_eavesdropper(const WheelConfig& cfg, double sigma,
                                           EntropySource& src, std::size_t samples) {
    EntropyAccumulator acc;
    accumulate_eavesdropper_entropy(cfg, sigma, src, samples, acc);
    return acc.estimate();
}

MiEstimate mutual_information_receiver(const WheelConfig& cfg, double sigma, EntropySource& src,
                                       std::size_t samples) {
    EntropyAccumulator acc;
    accumulate_receiver_entropy(cfg, sigma, src, samples, acc);
    return acc.estimate();
}

boost::multiprecision::cpp_int brute_force_count_uniform(std::uint32_t k0_len,
                                                         std::uint32_t n_sigma) {
    if (n_sigma < 2 || (n_sigma & (n_sigma - 1)) != 0)
        throw ContractViolation("work factor: coverage must be a power of two >= 2");
    std::uint32_t log2n = 0;
    for (std::uint32_t v = n_sigma; v > 1; v >>= 1) ++log2n;
    boost::multiprecision::cpp_int count = 1;
    count <<= k0_len;
    for (std::uint32_t i = 2; i <= log2n; ++i) count *= i;
    count *= n_sigma;
    return count;
}

boost::multiprecision::cpp_int brute_force_count_sector(std::uint32_t k0_len) {
    boost::multiprecision::cpp_int count = 1;
    count <<= k0_len;
    return count * 2;
}

std::vector<Phase> repeat_probe(const WheelConfig& cfg, double sigma, std::uint32_t basis,
                                std::uint8_t bit, EntropySource& src, std::size_t count) {
    if (bit > 1) throw ContractViolation("probe: bit is not 0 or 1");
    std::vector<Phase> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = encode(cfg, basis, bit, src.normal(sigma));
    return out;
}

Tap parse_tap(const std::vector<std::uint8_t>& bytes) {
    std::vector<Frame> frames;
    std::size_t off = 0;
    while (off < bytes.size()) {
        std::size_t consumed = 0;
        frames.push_back(decode_frame(bytes.data() + off, bytes.size() - off, consumed));
        off += consumed;
    }
    if (frames.size() < 7) throw ProtocolViolation("capture: too short for one full cycle");

    auto need = [&](std::size_t i, FrameType t, std::uint32_t cycle) -> const Frame& {
        if (i >= frames.size()) throw ProtocolViolation("capture: truncated exchange");
        const Frame& f = frames[i];
        if (f.type != t || f.cycle != cycle)
            throw ProtocolViolation("capture: frame out of order");
        return f;
    };

    Tap tap;
    tap.hello_initiator = decode_hello(need(0, FrameType::Hello, 0).payload);
    tap.session_id = frames[0].session_id;
    tap.hello_responder = decode_hello(need(1, FrameType::Hello, 0).payload);
    for (const Frame& f : frames)
        if (f.session_id != tap.session_id)
            throw ProtocolViolation("capture: mixed session ids");
    if (!tap.hello_initiator.same_config(tap.hello_responder))
        throw ProtocolViolation("capture: endpoints ran different parameter sets");

    const HelloPayload& h = tap.hello_initiator;
    std::size_t block_count =
        (h.symbols_per_cycle + h.digest_block_bits - 1) / h.digest_block_bits;

    std::size_t i = 2;
    std::uint32_t cycle = 1;
    while (i < frames.size()) {
        if (frames[i].type == FrameType::Restart) {
            std::uint32_t last = cycle - 1;
            if (last == 0) throw ProtocolViolation("capture: restart before any cycle");
            tap.restarted = true;
            tap.restart_emitter = decode_restart(need(i, FrameType::Restart, last).payload);
            tap.restart_receiver = decode_restart(need(i + 1, FrameType::Restart, last).payload);
            if (!(tap.restart_emitter == tap.restart_receiver))
                throw ProtocolViolation("capture: endpoints disagreed at restart");
            i += 2;
            break;
        }
        TapCycle tc;
        tc.cycle = cycle;
        tc.phase_quanta = decode_phases(need(i, FrameType::Phases, cycle).payload);
        if (tc.phase_quanta.size() != h.symbols_per_cycle)
            throw ProtocolViolation("capture: wrong symbol count");
        tc.digests_receiver = decode_digests(need(i + 1, FrameType::Digests, cycle).payload);
        tc.digests_emitter = decode_digests(need(i + 2, FrameType::Digests, cycle).payload);
        if (tc.digests_receiver.size() != block_count || tc.digests_emitter.size() != block_count)
            throw ProtocolViolation("capture: wrong digest count");
        tc.amplify_emitter = decode_amplify(need(i + 3, FrameType::Amplify, cycle).payload);
        tc.amplify_receiver = decode_amplify(need(i + 4, FrameType::Amplify, cycle).payload);
        if (!(tc.amplify_emitter == tc.amplify_receiver))
            throw ProtocolViolation("capture: endpoints disagreed after amplification");
        tap.cycles.push_back(std::move(tc));
        i += 5;
        ++cycle;
    }
    if (i != frames.size()) throw ProtocolViolation("capture: trailing frames");
    if (tap.cycles.empty()) throw ProtocolViolation("capture: no cycles");
    if (!tap.restarted && tap.cycles.size() != h.cycles)
        throw ProtocolViolation("capture: cycle count disagrees with the handshake");
    return tap;
}

ProtocolParams params_from_hello(const HelloPayload& h) {
    ProtocolParams p;
    if (h.mode == 0) {
        if (h.bits_per_basis < 1 || h.bits_per_basis > 16)
            throw ProtocolViolation("capture: basis width out of range");
        p.wheel = WheelConfig::uniform(1u << h.bits_per_basis);
    } else if (h.mode == 1) {
        p.wheel = WheelConfig::sector(dequantize_phase(h.delta_phi1_q));
    } else {
        throw ProtocolViolation("capture: unknown wheel mode");
    }
    p.sigma = dequantize_phase(h.sigma_q);
    p.symbols_per_cycle = h.symbols_per_cycle;
    p.min_distilled = h.min_distilled;
    p.cycles = h.cycles;
    p.f_retain = static_cast<double>(h.f_retain_e7) / 1e7;
    p.digest_block_bits = h.digest_block_bits;
    validate_params(p);
    return p;
}

ReplayResult replay_tap(const Tap& tap, const Bits& k0, double tolerance) {
    ProtocolParams params = params_from_hello(tap.hello_initiator);
    const WheelConfig& cfg = params.wheel;
    std::uint32_t L = params.symbols_per_cycle;
    std::uint32_t B = params.digest_block_bits;

    std::size_t basis_need = static_cast<std::size_t>(L) * cfg.bits_per_basis;
    bool amplified = params.f_retain < 1.0;
    if (k0.size() < basis_need + (amplified ? kSeedBits : 0))
        throw ContractViolation("replay: candidate key too short for the first cycle");

    Bits key = k0;
    Bits seed;
    if (amplified) {
        seed.assign(key.end() - kSeedBits, key.end());
        key.resize(key.size() - kSeedBits);
    }
    std::size_t consumed = 0;

    ReplayResult res;
    for (const TapCycle& tc : tap.cycles) {
        if (consumed + basis_need > key.size())
            throw ContractViolation("replay: candidate key exhausted mid-session");
        Bits key_slice(key.begin() + static_cast<std::ptrdiff_t>(consumed),
                       key.begin() + static_cast<std::ptrdiff_t>(consumed + basis_need));
        consumed += basis_need;
        std::vector<std::uint32_t> bases = bases_from_key(cfg, key_slice, L);

        Bits decoded(L);
        for (std::uint32_t s = 0; s < L; ++s) {
            Phase y = dequantize_phase(tc.phase_quanta[s]);
            Phase ref = basis_phase(cfg, bases[s]);
            if (params.sigma > 0.0) {
                double p = 0.5 * (wrapped_normal_pdf(y - ref, params.sigma) +
                                  wrapped_normal_pdf(y - ref - kPi, params.sigma));
                if (p > 0.0) {
                    res.log_likelihood += std::log(p);
                } else {
                    res.consistent = false;
                    res.log_likelihood = kNegInf;
                    return res;
                }
            } else {
                bool hit = std::abs(wrap_signed(y - ref)) <= tolerance ||
                           std::abs(wrap_signed(y - ref - kPi)) <= tolerance;
                if (!hit) {
                    res.consistent = false;
                    res.log_likelihood = kNegInf;
                    return res;
                }
            }
            decoded[s] = decode(cfg, bases[s], y);
        }
        res.raw_views.push_back(decoded);

        Bits survivors;
        survivors.reserve(L);
        for (std::size_t b = 0; b < tc.digests_emitter.size(); ++b) {
            if (tc.digests_emitter[b] != tc.digests_receiver[b]) continue;
            std::size_t start = b * B;
            std::size_t stop = std::min<std::size_t>(L, start + B);
            survivors.insert(survivors.end(), decoded.begin() + static_cast<std::ptrdiff_t>(start),
                             decoded.begin() + static_cast<std::ptrdiff_t>(stop));
        }
        key.insert(key.end(), survivors.begin(), survivors.end());

        std::size_t n = survivors.size();
        Bits distilled;
        if (!amplified) {
            distilled = survivors;
        } else {
            std::size_t m = amplified_length(n, effective_retention(params.f_retain, tc.cycle));
            if (m > 0) {
                if (seed.empty())
                    throw ProtocolViolation("replay: capture continues past seed exhaustion");
                distilled = toeplitz_amplify(survivors, expand_toeplitz_seed(seed, n + m - 1), m);
            }
        }
        if (distilled.size() != tc.amplify_emitter.out_len)
            throw ProtocolViolation("replay: capture's distilled length disagrees with arithmetic");

        if (amplified) {
            bool more = tc.cycle < params.cycles;
            if (more && distilled.size() >= kSeedBits) {
                seed.assign(distilled.begin(), distilled.begin() + kSeedBits);
                res.keystream.insert(res.keystream.end(), distilled.begin() + kSeedBits,
                                     distilled.end());
            } else {
                seed.clear();
                res.keystream.insert(res.keystream.end(), distilled.begin(), distilled.end());
            }
        } else {
            res.keystream.insert(res.keystream.end(), distilled.begin(), distilled.end());
        }
    }
    return res;
}

AttackReport exhaustive_attack(const Tap& tap, std::uint32_t k0_len, const Bits* true_k0) {
    if (k0_len < 1) throw ContractViolation("attack: key length must be positive");
    if (k0_len > kMaxAttackKeyBits)
        throw ResourceGuard("attack: key space exceeds the exhaustive search cap");

    std::uint64_t total = 1ull << k0_len;
    auto candidate_bits = [&](std::uint64_t id) {
        Bits k0(k0_len);
        for (std::uint32_t i = 0; i < k0_len; ++i) k0[i] = (id >> (k0_len - 1 - i)) & 1u;
        return k0;
    };

    std::vector<double> lls(total);
    AttackReport report;
    report.k0_len = k0_len;
    report.candidates = total;
    report.best_log_likelihood = kNegInf;
    for (std::uint64_t id = 0; id < total; ++id) {
        ReplayResult r = replay_tap(tap, candidate_bits(id));
        lls[id] = r.consistent ? r.log_likelihood : kNegInf;
        if (lls[id] > kNegInf) ++report.consistent;
        if (lls[id] > report.best_log_likelihood) {
            report.best_log_likelihood = lls[id];
            report.best_candidate = id;
        }
    }

    if (report.consistent > 0) {
        // Softmax over the finite scores; uniform over ties, which covers the
        // noise-free case where every surviving candidate scores zero.
        double max_ll = report.best_log_likelihood;
        double norm = 0.0;
        for (double ll : lls)
            if (ll > kNegInf) norm += std::exp(ll - max_ll);
        double h = 0.0;
        for (double ll : lls) {
            if (ll == kNegInf) continue;
            double p = std::exp(ll - max_ll) / norm;
            if (p > 0.0) h -= p * std::log2(p);
        }
        report.posterior_entropy_bits = h;
        report.recovered_keystream = replay_tap(tap, candidate_bits(report.best_candidate)).keystream;
    }

    if (true_k0) {
        ReplayResult rt = replay_tap(tap, *true_k0);
        report.has_truth = true;
        report.true_log_likelihood = rt.consistent ? rt.log_likelihood : kNegInf;
        std::uint64_t above = 0;
        for (double ll : lls)
            if (ll > report.true_log_likelihood) ++above;
        report.true_rank = 1 + above;
    }
    return report;
}

}  // namespace noisekey
