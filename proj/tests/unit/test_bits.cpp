#include <doctest.h>

#include <noisekey/bits.hpp>
#include <noisekey/errors.hpp>

#include "support/oracles.hpp"

using namespace noisekey;

TEST_CASE("pack_bits is MSB first with low zero padding") {
    Bits bits{1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
    std::vector<std::uint8_t> packed = pack_bits(bits);
    REQUIRE(packed.size() == 2);
    CHECK(packed[0] == 0xB2);
    CHECK(packed[1] == 0xC0);
    CHECK(unpack_bits(packed, 10) == bits);
}

TEST_CASE("pack_bits rejects non-binary values") {
    CHECK_THROWS_AS(pack_bits(Bits{0, 2}), ContractViolation);
}

TEST_CASE("unpack_bits rejects a count beyond the buffer") {
    CHECK_THROWS_AS(unpack_bits({0xFF}, 9), ContractViolation);
}

TEST_CASE("hex round trip") {
    std::vector<std::uint8_t> bytes{0x00, 0xde, 0xad, 0xbe, 0xef, 0xff};
    CHECK(to_hex(bytes) == "00deadbeefff");
    CHECK(from_hex("00deadbeefff") == bytes);
    CHECK(from_hex("00DEADBEEFFF") == bytes);
    CHECK_THROWS_AS(from_hex("abc"), ContractViolation);
    CHECK_THROWS_AS(from_hex("zz"), ContractViolation);
    CHECK_THROWS_AS(from_hex("00 de"), ContractViolation);
}

TEST_CASE("fnv1a64 known vectors") {
    auto h = [](const std::string& s) {
        return fnv1a64(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    };
    CHECK(h("") == 0xcbf29ce484222325ull);
    CHECK(h("a") == 0xaf63dc4c8601ec8cull);
    CHECK(h("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("fnv1a64 matches the long-hand oracle on random data") {
    std::vector<std::uint8_t> data;
    std::uint64_t x = 99;
    for (int i = 0; i < 257; ++i) {
        x = splitmix64(x);
        data.push_back(static_cast<std::uint8_t>(x));
    }
    CHECK(fnv1a64(data) == oracles::fnv64(data));
}

TEST_CASE("digest_bits binds the bit count") {
    // Same packed byte, different lengths: must not collide.
    CHECK(digest_bits(Bits{1, 0}) != digest_bits(Bits{1, 0, 0}));

    // Layout check: packed bits followed by the count as 8 big-endian bytes.
    Bits bits{1, 1, 0, 1};
    std::vector<std::uint8_t> manual = pack_bits(bits);
    for (int s = 56; s >= 0; s -= 8)
        manual.push_back(static_cast<std::uint8_t>((std::uint64_t{4} >> s) & 0xFF));
    CHECK(digest_bits(bits) == oracles::fnv64(manual));
}

TEST_CASE("splitmix64 reference sequence") {
    // Outputs for a stream starting at state 0, i.e. mix(k * gamma).
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(0x9E3779B97F4A7C15ull) == 0x6e789e6aa1b965f4ull);
    CHECK(splitmix64(0x9E3779B97F4A7C15ull * 2) == 0x06c45d188009454full);
}
