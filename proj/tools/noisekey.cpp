// Command line front end: local simulation, TCP endpoints, capture analysis,
// channel figures, key files, and one-time-pad application.
//
// Exit codes: 0 success; 2 bad arguments or domain guards; 3 key material
// exhausted or session halted for restart; 4 peer mismatch (key fingerprint,
// parameter set, or protocol state); 5 transport or frame corruption;
// 6 pad sidecar corruption.

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "noisekey/adversary.hpp"
#include "noisekey/errors.hpp"
#include "noisekey/keyfile.hpp"
#include "noisekey/session.hpp"
#include "noisekey/tcp.hpp"

namespace nk = noisekey;

namespace {

struct SidecarCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt_hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nk::ContractViolation("cannot open: " + path);
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw nk::ContractViolation("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw nk::ContractViolation("write failed: " + path);
}

// Options shared by every command that runs or describes a channel/session.
struct CommonOpts {
    std::string wheel = "sector:0.1";
    double sigma = 0.1;
    double photons = 0;
    double coverage = 0;
    std::uint32_t symbols = 1000;
    std::uint32_t cycles = 10;
    std::uint32_t min_distilled = 0;
    double f_retain = 0.9991;
    std::uint32_t block_bits = 64;
    std::optional<std::uint64_t> seed;
};

void add_wheel_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--wheel", o.wheel,
                    "constellation: sector:<delta_phi1> or uniform:<bases> (default sector:0.1)");
    auto* s = cmd->add_option("--sigma", o.sigma, "phase noise spread in radians (default 0.1)");
    auto* p = cmd->add_option("--photons", o.photons, "derive the spread from a mean photon number")
                  ->check(CLI::PositiveNumber);
    auto* c = cmd->add_option("--coverage", o.coverage,
                              "derive the spread from noise coverage in bases (uniform wheel)")
                  ->check(CLI::PositiveNumber);
    s->excludes(p)->excludes(c);
    p->excludes(c);
}

void add_session_flags(CLI::App* cmd, CommonOpts& o) {
    add_wheel_flags(cmd, o);
    cmd->add_option("--symbols", o.symbols, "symbols per cycle (default 1000)");
    cmd->add_option("--cycles", o.cycles, "number of cycles (default 10)");
    cmd->add_option("--l-min", o.min_distilled,
                    "per-cycle distilled floor, 0 disables (default 0)");
    cmd->add_option("--f-retain", o.f_retain, "privacy retention factor (default 0.9991)");
    cmd->add_option("--block", o.block_bits, "reconciliation block size in bits (default 64)");
}

void add_seed_flag(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "master seed; overrides NOISEKEY_TEST_SEED");
}

std::optional<std::uint64_t> resolve_master(const CommonOpts& o) {
    if (o.seed) return o.seed;
    const char* env = std::getenv("NOISEKEY_TEST_SEED");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
        throw nk::ContractViolation("NOISEKEY_TEST_SEED must be a decimal 64-bit integer");
    return static_cast<std::uint64_t>(v);
}

nk::WheelConfig parse_wheel(const std::string& spec) {
    std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw nk::ContractViolation("wheel spec must be sector:<angle> or uniform:<bases>");
    std::string kind = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    try {
        if (kind == "sector") return nk::WheelConfig::sector(std::stod(arg));
        if (kind == "uniform")
            return nk::WheelConfig::uniform(static_cast<std::uint32_t>(std::stoul(arg)));
    } catch (const std::invalid_argument&) {
        throw nk::ContractViolation("wheel spec has a malformed value: " + spec);
    } catch (const std::out_of_range&) {
        throw nk::ContractViolation("wheel spec value out of range: " + spec);
    }
    throw nk::ContractViolation("wheel spec must be sector:<angle> or uniform:<bases>");
}

nk::ProtocolParams build_params(const CommonOpts& o, const CLI::App* cmd) {
    nk::ProtocolParams p;
    p.wheel = parse_wheel(o.wheel);
    if (cmd->count("--photons"))
        p.sigma = nk::sigma_from_photons(o.photons);
    else if (cmd->count("--coverage"))
        p.sigma = nk::sigma_from_coverage(o.coverage, p.wheel.basis_count);
    else
        p.sigma = o.sigma;
    p.symbols_per_cycle = o.symbols;
    p.min_distilled = o.min_distilled;
    p.cycles = o.cycles;
    p.f_retain = o.f_retain;
    p.digest_block_bits = o.block_bits;
    nk::validate_params(p);
    return p;
}

std::size_t k0_bits_needed(const nk::ProtocolParams& p) {
    std::size_t n = static_cast<std::size_t>(p.symbols_per_cycle) * p.wheel.bits_per_basis;
    if (p.f_retain < 1.0) n += nk::kSeedBits;
    return n;
}

const char* reason_name(nk::RestartReason r) {
    switch (r) {
        case nk::RestartReason::BelowMinimum: return "below_minimum";
        case nk::RestartReason::KeyExhausted: return "key_exhausted";
        default: return "none";
    }
}

void print_ledger_summary(const nk::SessionResult& r) {
    const nk::SessionLedger& led = r.ledger;
    std::printf("session_id %s\n", fmt_hex64(r.session_id).c_str());
    std::printf("cycles_completed %zu\n", led.cycles.size());
    std::printf("restart_required %d\n", led.restart_required ? 1 : 0);
    std::printf("restart_reason %s\n", reason_name(led.reason));
    std::printf("raw_total %llu\n", static_cast<unsigned long long>(led.raw_total()));
    std::printf("distilled_total %llu\n", static_cast<unsigned long long>(led.distilled_total()));
    std::printf("discarded_reconciliation_total %llu\n",
                static_cast<unsigned long long>(led.discarded_reconciliation_total()));
    std::printf("discarded_privacy_total %llu\n",
                static_cast<unsigned long long>(led.discarded_privacy_total()));
    double frac = led.raw_total()
                      ? static_cast<double>(led.distilled_total()) /
                            static_cast<double>(led.raw_total())
                      : 0.0;
    std::printf("distilled_fraction %s\n", fmt_g(frac).c_str());
    std::printf("keystream_bits %zu\n", r.keystream.size());
}

// ---------------------------------------------------------------- simulate --

struct SimulateOpts {
    CommonOpts common;
    std::string key_path, save_key_path, csv_path, out_a, out_b, transcript_path;
};

struct EndpointRun {
    nk::SessionResult result;
    std::exception_ptr error;
};

int cmd_simulate(const SimulateOpts& so, const CLI::App* cmd) {
    nk::ProtocolParams params = build_params(so.common, cmd);
    std::optional<std::uint64_t> master = resolve_master(so.common);

    nk::Bits k0;
    if (!so.key_path.empty()) {
        k0 = nk::load_key_file(so.key_path);
    } else {
        nk::EntropySource src = master
                                    ? nk::EntropySource::seeded(nk::splitmix64(*master ^ 6))
                                    : nk::EntropySource::system();
        k0 = src.fresh_bits(k0_bits_needed(params));
    }
    if (!so.save_key_path.empty()) nk::save_key_file(so.save_key_path, k0, false);

    nk::SessionOptions a, b;
    a.role = nk::Role::Initiator;
    b.role = nk::Role::Responder;
    a.params = b.params = params;
    a.k0 = b.k0 = k0;
    if (master) {
        nk::SeedPlan plan = nk::derive_seed_plan(*master);
        a.entropy = nk::EntropySource::seeded(plan.initiator_rng);
        b.entropy = nk::EntropySource::seeded(plan.responder_rng);
        a.session_id = plan.session_id;
        a.salt = plan.initiator_salt;
        b.salt = plan.responder_salt;
    } else {
        nk::EntropySource src = nk::EntropySource::system();
        a.session_id = src.next_u64();
        a.salt = src.next_u64();
        b.salt = src.next_u64();
    }

    nk::InMemoryDuplex duplex;
    EndpointRun ra, rb;
    auto runner = [&duplex](nk::Link& link, const nk::SessionOptions& opt, EndpointRun& out) {
        try {
            out.result = nk::run_endpoint(link, opt);
        } catch (...) {
            out.error = std::current_exception();
            duplex.close();
        }
    };
    std::thread ta(runner, std::ref(duplex.a()), std::cref(a), std::ref(ra));
    std::thread tb(runner, std::ref(duplex.b()), std::cref(b), std::ref(rb));
    ta.join();
    tb.join();
    if (ra.error) std::rethrow_exception(ra.error);
    if (rb.error) std::rethrow_exception(rb.error);

    const nk::SessionLedger& led = ra.result.ledger;
    std::uint64_t mismatched = 0, compared = 0;
    std::vector<double> cycle_ber(led.cycles.size(), 0.0);
    for (std::size_t c = 0; c < led.cycles.size(); ++c) {
        const nk::Bits& va = ra.result.raw_views[c];
        const nk::Bits& vb = rb.result.raw_views[c];
        std::uint64_t bad = 0;
        for (std::size_t i = 0; i < va.size(); ++i) bad += va[i] != vb[i];
        cycle_ber[c] = va.empty() ? 0.0 : static_cast<double>(bad) / va.size();
        mismatched += bad;
        compared += va.size();
    }

    if (!so.csv_path.empty()) {
        std::ofstream csv(so.csv_path, std::ios::trunc);
        if (!csv) throw nk::ContractViolation("cannot open for writing: " + so.csv_path);
        csv << "cycle,emitter,raw,survivors,distilled,discarded_reconciliation,"
               "discarded_privacy,ber\n";
        for (std::size_t c = 0; c < led.cycles.size(); ++c) {
            const nk::CycleLedger& row = led.cycles[c];
            csv << (c + 1) << ',' << ((c % 2 == 0) ? 'A' : 'B') << ',' << row.raw_shared << ','
                << (row.raw_shared - row.discarded_reconciliation) << ',' << row.distilled << ','
                << row.discarded_reconciliation << ',' << row.discarded_privacy << ','
                << fmt_g(cycle_ber[c]) << '\n';
        }
        if (!csv) throw nk::ContractViolation("write failed: " + so.csv_path);
    }

    if (!so.out_a.empty()) nk::save_key_file(so.out_a, ra.result.keystream, false);
    if (!so.out_b.empty()) nk::save_key_file(so.out_b, rb.result.keystream, false);
    if (!so.transcript_path.empty()) write_binary_file(so.transcript_path, ra.result.transcript);

    print_ledger_summary(ra.result);
    std::printf("k0_bits %zu\n", k0.size());
    std::printf("ber_overall %s\n",
                fmt_g(compared ? static_cast<double>(mismatched) / compared : 0.0).c_str());
    std::printf("keystream_match %d\n", ra.result.keystream == rb.result.keystream ? 1 : 0);
    std::printf("transcript_match %d\n", ra.result.transcript == rb.result.transcript ? 1 : 0);
    return led.restart_required ? 3 : 0;
}

// ------------------------------------------------------------ serve/connect --

struct NetOpts {
    CommonOpts common;
    std::string key_path, out_path, transcript_path;
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
};

int run_net_endpoint(nk::Link& link, nk::Role role, const NetOpts& no, const CLI::App* cmd) {
    nk::ProtocolParams params = build_params(no.common, cmd);
    std::optional<std::uint64_t> master = resolve_master(no.common);

    nk::SessionOptions opt;
    opt.role = role;
    opt.params = params;
    opt.k0 = nk::load_key_file(no.key_path);
    if (master) {
        nk::SeedPlan plan = nk::derive_seed_plan(*master);
        bool init = role == nk::Role::Initiator;
        opt.entropy = nk::EntropySource::seeded(init ? plan.initiator_rng : plan.responder_rng);
        opt.session_id = init ? plan.session_id : 0;
        opt.salt = init ? plan.initiator_salt : plan.responder_salt;
    } else {
        nk::EntropySource src = nk::EntropySource::system();
        opt.session_id = src.next_u64();
        opt.salt = src.next_u64();
    }

    nk::SessionResult result = nk::run_endpoint(link, opt);
    if (!no.out_path.empty()) nk::save_key_file(no.out_path, result.keystream, false);
    if (!no.transcript_path.empty()) write_binary_file(no.transcript_path, result.transcript);
    print_ledger_summary(result);
    return result.ledger.restart_required ? 3 : 0;
}

int cmd_serve(const NetOpts& no, const CLI::App* cmd) {
    nk::TcpListener listener(no.port);
    std::printf("listening %u\n", listener.port());
    std::fflush(stdout);
    nk::TcpStream stream = listener.accept_one();
    return run_net_endpoint(stream, nk::Role::Responder, no, cmd);
}

int cmd_connect(const NetOpts& no, const CLI::App* cmd) {
    nk::TcpStream stream = nk::tcp_connect(no.host, no.port);
    return run_net_endpoint(stream, nk::Role::Initiator, no, cmd);
}

// ------------------------------------------------------------------- attack --

struct AttackOpts {
    std::string transcript_path, true_key_path;
    std::uint32_t k0_len = 0;
};

int cmd_attack(const AttackOpts& ao) {
    nk::Tap tap = nk::parse_tap(read_binary_file(ao.transcript_path));
    std::optional<nk::Bits> truth;
    if (!ao.true_key_path.empty()) truth = nk::load_key_file(ao.true_key_path);
    nk::AttackReport rep = nk::exhaustive_attack(tap, ao.k0_len, truth ? &*truth : nullptr);

    std::printf("k0_len %u\n", rep.k0_len);
    std::printf("candidates %llu\n", static_cast<unsigned long long>(rep.candidates));
    std::printf("consistent %llu\n", static_cast<unsigned long long>(rep.consistent));
    std::printf("posterior_entropy_bits %s\n", fmt_g(rep.posterior_entropy_bits).c_str());
    nk::Bits best(rep.k0_len);
    for (std::uint32_t i = 0; i < rep.k0_len; ++i)
        best[i] = (rep.best_candidate >> (rep.k0_len - 1 - i)) & 1u;
    std::printf("best_candidate %s\n", nk::to_hex(nk::pack_bits(best)).c_str());
    std::printf("best_log_likelihood %s\n", fmt_g(rep.best_log_likelihood).c_str());
    std::printf("recovered_keystream_bits %zu\n", rep.recovered_keystream.size());
    if (rep.has_truth) {
        std::printf("true_rank %llu\n", static_cast<unsigned long long>(rep.true_rank));
        std::printf("true_log_likelihood %s\n", fmt_g(rep.true_log_likelihood).c_str());
    }
    return 0;
}

// --------------------------------------------------------------------- info --

struct InfoOpts {
    CommonOpts common;
    std::size_t samples = 20000;
    std::uint32_t k0_len = 64;
    std::string grid;
};

int cmd_info(const InfoOpts& io, const CLI::App* cmd) {
    nk::ProtocolParams params = build_params(io.common, cmd);
    const nk::WheelConfig& wheel = params.wheel;
    std::optional<std::uint64_t> master = resolve_master(io.common);
    nk::EntropySource src = master ? nk::EntropySource::seeded(nk::splitmix64(*master ^ 7))
                                   : nk::EntropySource::system();

    if (!io.grid.empty()) {
        std::printf("sigma,ber,i_receiver,i_receiver_stderr,i_eavesdropper,"
                    "i_eavesdropper_stderr,delta_i\n");
        std::stringstream ss(io.grid);
        std::string item;
        while (std::getline(ss, item, ',')) {
            double sigma = std::stod(item);
            double ber = nk::bob_error_probability(sigma);
            nk::MiEstimate ib = nk::mutual_information_receiver(wheel, sigma, src, io.samples);
            nk::MiEstimate ie = nk::mutual_information_eavesdropper(wheel, sigma, src, io.samples);
            std::printf("%s,%s,%s,%s,%s,%s,%s\n", fmt_g(sigma).c_str(), fmt_g(ber).c_str(),
                        fmt_g(ib.bits).c_str(), fmt_g(ib.std_err).c_str(), fmt_g(ie.bits).c_str(),
                        fmt_g(ie.std_err).c_str(), fmt_g(ib.bits - ie.bits).c_str());
        }
        return 0;
    }

    std::printf("mode %s\n", wheel.mode == nk::WheelMode::Sector ? "sector" : "uniform");
    std::printf("basis_count %u\n", wheel.basis_count);
    std::printf("bits_per_basis %u\n", wheel.bits_per_basis);
    std::printf("delta_phi1 %s\n", fmt_g(wheel.delta_phi1).c_str());
    std::printf("sigma %s\n", fmt_g(params.sigma).c_str());
    std::printf("ber_analytic %s\n", fmt_g(nk::bob_error_probability(params.sigma)).c_str());
    if (wheel.mode == nk::WheelMode::Sector) {
        std::ostringstream os;
        os << nk::brute_force_count_sector(io.k0_len);
        std::printf("work_factor %s\n", os.str().c_str());
    } else if (cmd->count("--coverage")) {
        std::ostringstream os;
        os << nk::brute_force_count_uniform(
            io.k0_len, static_cast<std::uint32_t>(std::llround(io.common.coverage)));
        std::printf("work_factor %s\n", os.str().c_str());
    }
    nk::MiEstimate ib = nk::mutual_information_receiver(wheel, params.sigma, src, io.samples);
    nk::MiEstimate ie =
        nk::mutual_information_eavesdropper(wheel, params.sigma, src, io.samples);
    std::printf("samples %zu\n", io.samples);
    std::printf("i_receiver %s\n", fmt_g(ib.bits).c_str());
    std::printf("i_receiver_stderr %s\n", fmt_g(ib.std_err).c_str());
    std::printf("i_eavesdropper %s\n", fmt_g(ie.bits).c_str());
    std::printf("i_eavesdropper_stderr %s\n", fmt_g(ie.std_err).c_str());
    std::printf("delta_i %s\n", fmt_g(ib.bits - ie.bits).c_str());
    return 0;
}

// ---------------------------------------------------------------------- otp --

struct OtpOpts {
    std::string key_path, in_path, out_path, sidecar_path;
};

struct SidecarState {
    std::uint64_t consumed_bits = 0;
    std::string key_digest;
};

std::string sidecar_check(std::uint64_t consumed, const std::string& digest) {
    std::string s = std::to_string(consumed) + ":" + digest;
    std::vector<std::uint8_t> bytes(s.begin(), s.end());
    return fmt_hex64(nk::fnv1a64(bytes));
}

SidecarState load_sidecar(const std::string& path, const std::string& want_digest,
                          std::uint64_t key_bits) {
    std::ifstream in(path);
    if (!in) return SidecarState{0, want_digest};
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw SidecarCorrupt("pad sidecar is not valid JSON: " + path);
    if (!j.is_object() || !j.contains("consumed_bits") || !j.contains("key_digest") ||
        !j.contains("check") || !j["consumed_bits"].is_number_unsigned() ||
        !j["key_digest"].is_string() || !j["check"].is_string())
        throw SidecarCorrupt("pad sidecar is missing fields: " + path);
    SidecarState st{j["consumed_bits"].get<std::uint64_t>(), j["key_digest"].get<std::string>()};
    if (j["check"].get<std::string>() != sidecar_check(st.consumed_bits, st.key_digest))
        throw SidecarCorrupt("pad sidecar failed its self-check: " + path);
    if (st.key_digest != want_digest)
        throw SidecarCorrupt("pad sidecar belongs to a different key: " + path);
    if (st.consumed_bits > key_bits)
        throw SidecarCorrupt("pad sidecar claims more bits than the key holds: " + path);
    return st;
}

void save_sidecar(const std::string& path, const SidecarState& st) {
    nlohmann::json j;
    j["consumed_bits"] = st.consumed_bits;
    j["key_digest"] = st.key_digest;
    j["check"] = sidecar_check(st.consumed_bits, st.key_digest);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw nk::ContractViolation("cannot open for writing: " + path);
    out << j.dump() << '\n';
    if (!out) throw nk::ContractViolation("write failed: " + path);
}

int cmd_otp(const OtpOpts& oo) {
    nk::Bits key = nk::load_key_file(oo.key_path);
    std::string digest = fmt_hex64(nk::fnv1a64(nk::pack_bits(key)));
    std::string sidecar = oo.sidecar_path.empty() ? oo.key_path + ".pad" : oo.sidecar_path;
    SidecarState st = load_sidecar(sidecar, digest, key.size());

    std::vector<std::uint8_t> data = read_binary_file(oo.in_path);
    nk::Keystream pad(std::move(key));
    pad.skip(st.consumed_bits);
    std::vector<std::uint8_t> out = nk::otp_apply(data, pad);
    write_binary_file(oo.out_path, out);

    st.consumed_bits += 8ull * data.size();
    save_sidecar(sidecar, st);
    std::printf("bytes %zu\n", out.size());
    std::printf("consumed_bits %llu\n", static_cast<unsigned long long>(st.consumed_bits));
    std::printf("remaining_bits %llu\n", static_cast<unsigned long long>(pad.remaining()));
    return 0;
}

// ------------------------------------------------------------------- keygen --

struct KeygenOpts {
    CommonOpts common;
    std::uint64_t bits = 0;
    std::string out_path;
    bool hex = false;
};

int cmd_keygen(const KeygenOpts& ko) {
    if (ko.bits == 0) throw nk::ContractViolation("key must have at least one bit");
    std::optional<std::uint64_t> master = resolve_master(ko.common);
    nk::EntropySource src =
        master ? nk::EntropySource::seeded(*master) : nk::EntropySource::system();
    nk::save_key_file(ko.out_path, src.fresh_bits(ko.bits), ko.hex);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"noise-keyed phase-wheel key distribution"};
    app.require_subcommand(1);

    SimulateOpts so;
    CLI::App* sim = app.add_subcommand("simulate", "run both endpoints over an in-process pipe");
    add_session_flags(sim, so.common);
    add_seed_flag(sim, so.common);
    sim->add_option("--key", so.key_path, "initial key file (generated when omitted)");
    sim->add_option("--save-key", so.save_key_path, "write the initial key used");
    sim->add_option("--csv", so.csv_path, "write per-cycle accounting rows");
    sim->add_option("--out-a", so.out_a, "write initiator keystream");
    sim->add_option("--out-b", so.out_b, "write responder keystream");
    sim->add_option("--transcript", so.transcript_path, "write the raw frame exchange");

    NetOpts servo;
    CLI::App* serve = app.add_subcommand("serve", "wait for a peer and run the responder side");
    add_session_flags(serve, servo.common);
    add_seed_flag(serve, servo.common);
    serve->add_option("--port", servo.port, "TCP port; 0 picks one and prints it");
    serve->add_option("--key", servo.key_path, "initial key file")->required();
    serve->add_option("--out", servo.out_path, "write this side's keystream");
    serve->add_option("--transcript", servo.transcript_path, "write the raw frame exchange");

    NetOpts conno;
    CLI::App* conn = app.add_subcommand("connect", "connect to a peer and run the initiator side");
    add_session_flags(conn, conno.common);
    add_seed_flag(conn, conno.common);
    conn->add_option("--host", conno.host, "peer host (default 127.0.0.1)");
    conn->add_option("--port", conno.port, "peer TCP port")->required();
    conn->add_option("--key", conno.key_path, "initial key file")->required();
    conn->add_option("--out", conno.out_path, "write this side's keystream");
    conn->add_option("--transcript", conno.transcript_path, "write the raw frame exchange");

    AttackOpts ao;
    CLI::App* atk = app.add_subcommand("attack", "exhaustively score initial keys against a capture");
    atk->add_option("--transcript", ao.transcript_path, "captured frame exchange")->required();
    atk->add_option("--k0-len", ao.k0_len, "initial key length in bits (max 20)")->required();
    atk->add_option("--true-key", ao.true_key_path, "rank this key among the candidates");

    InfoOpts io;
    CLI::App* info = app.add_subcommand("info", "channel figures for a configuration");
    add_wheel_flags(info, io.common);
    add_seed_flag(info, io.common);
    info->add_option("--samples", io.samples, "Monte Carlo samples (default 20000)");
    info->add_option("--k0-len", io.k0_len, "key length for the work factor (default 64)");
    info->add_option("--grid", io.grid, "comma-separated spreads; emits CSV rows instead");

    OtpOpts oo;
    CLI::App* otp = app.add_subcommand("otp", "XOR a file against unconsumed keystream bits");
    otp->add_option("--key", oo.key_path, "keystream file")->required();
    otp->add_option("--in", oo.in_path, "input file")->required();
    otp->add_option("--out", oo.out_path, "output file")->required();
    otp->add_option("--sidecar", oo.sidecar_path, "consumption tracker (default <key>.pad)");

    KeygenOpts ko;
    CLI::App* keygen = app.add_subcommand("keygen", "generate a key file");
    add_seed_flag(keygen, ko.common);
    keygen->add_option("--bits", ko.bits, "key length in bits")->required();
    keygen->add_option("--out", ko.out_path, "output file")->required();
    keygen->add_flag("--hex", ko.hex, "write the hex form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(so, sim);
        if (serve->parsed()) return cmd_serve(servo, serve);
        if (conn->parsed()) return cmd_connect(conno, conn);
        if (atk->parsed()) return cmd_attack(ao);
        if (info->parsed()) return cmd_info(io, info);
        if (otp->parsed()) return cmd_otp(oo);
        if (keygen->parsed()) return cmd_keygen(ko);
    } catch (const SidecarCorrupt& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 6;
    } catch (const nk::TransportError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const nk::WireError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const nk::FingerprintMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const nk::ConfigMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const nk::ProtocolViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const nk::KeyExhausted& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const nk::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
