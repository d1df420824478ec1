#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "support/subprocess.hpp"

using subprocess::quote;
using subprocess::run;

namespace {

const std::string& bin() {
    static std::string b = subprocess::cli_bin();
    return b;
}

const std::string& golden() {
    static std::string g = subprocess::golden_dir();
    return g;
}

// Fresh scratch dir per test case, removed afterwards.
struct Scratch {
    std::string dir;
    Scratch() : dir(subprocess::make_temp_dir("cli")) {}
    ~Scratch() { run("rm -rf " + quote(dir)); }
    std::string path(const char* name) const { return dir + "/" + name; }
};

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("keygen writes the requested container") {
    Scratch s;
    auto r = run(bin() + " keygen --bits 77 --out " + quote(s.path("k.key")) + " --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
    CHECK(subprocess::read_file(s.path("k.key")).size() == 16 + 10);

    r = run(bin() + " keygen --bits 77 --hex --out " + quote(s.path("k.hex")) + " --seed 1");
    CHECK(r.exit_code == 0);
    // Hex form is text twice the size plus the newline; both load identically,
    // which the simulate determinism case below relies on.
    CHECK(subprocess::read_file(s.path("k.hex")).size() == 2 * 26 + 1);

    // Same seed, same key bits.
    r = run(bin() + " keygen --bits 77 --out " + quote(s.path("k2.key")) + " --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(subprocess::read_file(s.path("k2.key")) == subprocess::read_file(s.path("k.key")));
}

TEST_CASE("argument and domain errors exit with 2") {
    Scratch s;
    CHECK(run(bin() + " nosuchcommand").exit_code == 2);
    CHECK(run(bin() + " info --sigma 2.0 --seed 1").exit_code == 2);
    CHECK(run(bin() + " info --wheel uniform:3 --seed 1").exit_code == 2);
    CHECK(run(bin() + " info --wheel sector:0.001 --seed 1").exit_code == 2);
    CHECK(run(bin() + " simulate --symbols 0 --seed 1").exit_code == 2);
    CHECK(run(bin() + " keygen --bits 8 --out " + quote(s.path("k.key")) +
              " --seed notanumber")
              .exit_code == 2);
    // Malformed environment seed is an error, not a silent fallback.
    auto r = run("NOISEKEY_TEST_SEED=abc " + bin() + " keygen --bits 8 --out " +
                 quote(s.path("k.key")));
    CHECK(r.exit_code == 2);
    CHECK(contains(r.output, "NOISEKEY_TEST_SEED"));
    // Flag wins over the environment.
    r = run("NOISEKEY_TEST_SEED=abc " + bin() + " keygen --bits 8 --seed 3 --out " +
            quote(s.path("k.key")));
    CHECK(r.exit_code == 0);
}

TEST_CASE("info prints the channel figures") {
    auto r = run(bin() + " info --wheel sector:0.02 --sigma 0.4 --samples 20000 --seed 7");
    CHECK(r.exit_code == 0);
    for (const char* key : {"mode sector", "delta_phi1 0.02", "sigma 0.4", "ber_analytic",
                            "work_factor 36893488147419103232", "i_receiver", "i_eavesdropper",
                            "delta_i", "samples 20000"})
        CHECK(contains(r.output, key));
}

TEST_CASE("info grid emits one CSV row per spread") {
    auto r = run(bin() + " info --wheel sector:0.1 --grid 0.2,0.4 --samples 2000 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output,
                   "sigma,ber,i_receiver,i_receiver_stderr,i_eavesdropper,"
                   "i_eavesdropper_stderr,delta_i"));
    CHECK(contains(r.output, "\n0.2,"));
    CHECK(contains(r.output, "\n0.4,"));
}

TEST_CASE("simulate reproduces the golden session byte for byte") {
    Scratch s;
    std::string cmd = bin() + " simulate --wheel sector:0.1 --sigma 0.1 --symbols 64" +
                      " --cycles 2 --f-retain 1 --key " + quote(golden() + "/k0.key") +
                      " --out-a " + quote(s.path("a.key")) + " --out-b " + quote(s.path("b.key")) +
                      " --transcript " + quote(s.path("t.bin")) + " --csv " +
                      quote(s.path("c.csv"));
    auto r = run("NOISEKEY_TEST_SEED=424242 " + cmd);
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "session_id 1bc471ce380eaea0"));
    CHECK(contains(r.output, "keystream_match 1"));
    CHECK(contains(r.output, "transcript_match 1"));
    CHECK(contains(r.output, "ber_overall 0"));
    CHECK(subprocess::read_file(s.path("a.key")) == subprocess::read_file(s.path("b.key")));
    CHECK(subprocess::read_file(s.path("a.key")) ==
          subprocess::read_file(golden() + "/keystream.key"));
    CHECK(subprocess::read_file(s.path("t.bin")) ==
          subprocess::read_file(golden() + "/session.tr"));
    CHECK(subprocess::read_file(s.path("c.csv")) == subprocess::read_file(golden() + "/cycles.csv"));
}

TEST_CASE("a session that cannot continue exits with 3") {
    Scratch s;
    std::string key = s.path("k128.key");
    REQUIRE(run(bin() + " keygen --bits 128 --out " + quote(key) + " --seed 9").exit_code == 0);
    // floor(0.9991 * 64) = 63 distilled bits cannot fund the next 64-bit seed.
    auto r = run(bin() + " simulate --key " + quote(key) +
                 " --symbols 64 --cycles 3 --f-retain 0.9991 --seed 424242");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "restart_required 1"));
    CHECK(contains(r.output, "restart_reason key_exhausted"));
}

TEST_CASE("per-cycle floor failures exit with 3 and name the reason") {
    Scratch s;
    std::string key = s.path("k128.key");
    REQUIRE(run(bin() + " keygen --bits 128 --out " + quote(key) + " --seed 9").exit_code == 0);
    auto r = run(bin() + " simulate --key " + quote(key) +
                 " --symbols 64 --cycles 3 --f-retain 0.9991 --l-min 64 --seed 424242");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "restart_reason below_minimum"));
}

TEST_CASE("tcp mismatches exit with 4 on both ends") {
    Scratch s;
    std::string ka = s.path("ka.key"), kb = s.path("kb.key");
    REQUIRE(run(bin() + " keygen --bits 64 --out " + quote(ka) + " --seed 111").exit_code == 0);
    REQUIRE(run(bin() + " keygen --bits 64 --out " + quote(kb) + " --seed 222").exit_code == 0);

    std::string log = s.path("serve.log");
    subprocess::spawn_logged(bin() + " serve --port 0 --key " + quote(ka) +
                                 " --symbols 64 --cycles 2 --f-retain 1 --seed 1",
                             log);
    std::string seen = subprocess::wait_for(log, "listening ", 10.0);
    REQUIRE(contains(seen, "listening "));
    std::string port = seen.substr(seen.find("listening ") + 10);
    port = port.substr(0, port.find('\n'));

    auto r = run(bin() + " connect --port " + port + " --key " + quote(kb) +
                 " --symbols 64 --cycles 2 --f-retain 1 --seed 2");
    CHECK(r.exit_code == 4);
    CHECK(contains(r.output, "different initial key"));
    seen = subprocess::wait_for(log, "EXIT:", 10.0);
    CHECK(contains(seen, "EXIT:4"));
}

TEST_CASE("connecting to a dead port exits with 5") {
    auto r = run(bin() + " connect --host 127.0.0.1 --port 1 --key " +
                 quote(golden() + "/k0.key") + " --seed 1");
    CHECK(r.exit_code == 5);
    CHECK(contains(r.output, "tcp connect"));
}

TEST_CASE("otp round trip with sidecar accounting") {
    Scratch s;
    std::string pad = s.path("pad.key");
    REQUIRE(run(bin() + " keygen --bits 4096 --out " + quote(pad) + " --seed 5").exit_code == 0);
    subprocess::write_file(s.path("msg.txt"),
                           {'a', 't', 't', 'a', 'c', 'k', ' ', 'a', 't', ' ', 'd', 'a', 'w', 'n'});

    auto enc = run(bin() + " otp --key " + quote(pad) + " --in " + quote(s.path("msg.txt")) +
                   " --out " + quote(s.path("msg.ct")) + " --sidecar " + quote(s.path("enc.json")));
    CHECK(enc.exit_code == 0);
    CHECK(contains(enc.output, "bytes 14"));
    CHECK(contains(enc.output, "consumed_bits 112"));
    CHECK(subprocess::read_file(s.path("msg.ct")) != subprocess::read_file(s.path("msg.txt")));

    // Decrypting from offset zero with a fresh sidecar restores the text.
    auto dec = run(bin() + " otp --key " + quote(pad) + " --in " + quote(s.path("msg.ct")) +
                   " --out " + quote(s.path("msg.rt")) + " --sidecar " + quote(s.path("dec.json")));
    CHECK(dec.exit_code == 0);
    CHECK(subprocess::read_file(s.path("msg.rt")) == subprocess::read_file(s.path("msg.txt")));

    // A second encryption under the same sidecar consumes the next segment.
    auto enc2 = run(bin() + " otp --key " + quote(pad) + " --in " + quote(s.path("msg.txt")) +
                    " --out " + quote(s.path("msg2.ct")) + " --sidecar " +
                    quote(s.path("enc.json")));
    CHECK(enc2.exit_code == 0);
    CHECK(contains(enc2.output, "consumed_bits 224"));
    CHECK(subprocess::read_file(s.path("msg2.ct")) != subprocess::read_file(s.path("msg.ct")));
}

TEST_CASE("tampered or unreadable sidecars exit with 6") {
    Scratch s;
    std::string pad = s.path("pad.key");
    REQUIRE(run(bin() + " keygen --bits 1024 --out " + quote(pad) + " --seed 5").exit_code == 0);
    subprocess::write_file(s.path("msg.txt"), {'x', 'y', 'z'});
    std::string otp_cmd = bin() + " otp --key " + quote(pad) + " --in " +
                          quote(s.path("msg.txt")) + " --out " + quote(s.path("msg.ct")) +
                          " --sidecar " + quote(s.path("pad.json"));
    REQUIRE(run(otp_cmd).exit_code == 0);

    REQUIRE(run("sed -i 's/\"consumed_bits\":24/\"consumed_bits\":8/' " +
                quote(s.path("pad.json")))
                .exit_code == 0);
    auto r = run(otp_cmd);
    CHECK(r.exit_code == 6);
    CHECK(contains(r.output, "self-check"));

    subprocess::write_file(s.path("pad.json"), {'n', 'o', 't', ' ', 'j', 's', 'o', 'n'});
    CHECK(run(otp_cmd).exit_code == 6);
}

TEST_CASE("otp refuses to outrun the pad") {
    Scratch s;
    std::string pad = s.path("tiny.key");
    REQUIRE(run(bin() + " keygen --bits 32 --out " + quote(pad) + " --seed 5").exit_code == 0);
    subprocess::write_file(s.path("msg.txt"), {'0', '1', '2', '3', '4', '5', '6', '7'});
    auto r = run(bin() + " otp --key " + quote(pad) + " --in " + quote(s.path("msg.txt")) +
                 " --out " + quote(s.path("msg.ct")) + " --sidecar " + quote(s.path("pad.json")));
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "not enough key bits"));
}

TEST_CASE("attack reports are deterministic for a fixed capture") {
    Scratch s;
    std::string key = s.path("k8.key");
    REQUIRE(run(bin() + " keygen --bits 8 --out " + quote(key) + " --seed 77").exit_code == 0);
    std::string tr = s.path("cap.tr");
    auto sim = run("NOISEKEY_TEST_SEED=424242 " + bin() + " simulate --wheel sector:0.1" +
                   " --sigma 0 --symbols 8 --cycles 2 --f-retain 1 --key " + quote(key) +
                   " --transcript " + quote(tr));
    REQUIRE(sim.exit_code == 0);

    std::string atk_cmd =
        bin() + " attack --transcript " + quote(tr) + " --k0-len 8 --true-key " + quote(key);
    auto r1 = run(atk_cmd);
    CHECK(r1.exit_code == 0);
    CHECK(contains(r1.output, "consistent 1"));
    CHECK(contains(r1.output, "true_rank 1"));
    CHECK(contains(r1.output, "posterior_entropy_bits 0"));
    auto r2 = run(atk_cmd);
    CHECK(r2.exit_code == 0);
    CHECK(r1.output == r2.output);

    CHECK(run(bin() + " attack --transcript " + quote(tr) + " --k0-len 21").exit_code == 2);
}
