#include <doctest.h>

#include <cmath>
#include <noisekey/constellation.hpp>
#include <noisekey/errors.hpp>

using namespace noisekey;
using doctest::Approx;

TEST_CASE("wrap_2pi lands in [0, 2pi)") {
    CHECK(wrap_2pi(0.0) == 0.0);
    CHECK(wrap_2pi(kTwoPi) == 0.0);
    CHECK(wrap_2pi(-kTwoPi) == 0.0);
    CHECK(wrap_2pi(7.5 * kPi) == Approx(1.5 * kPi).epsilon(1e-12));
    CHECK(wrap_2pi(-0.5) == Approx(kTwoPi - 0.5).epsilon(1e-12));
    for (double x : {-123.456, -1e-9, 1e9, 0.25}) {
        double w = wrap_2pi(x);
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
    }
}

TEST_CASE("wrap_signed lands in (-pi, pi] and keeps pi positive") {
    CHECK(wrap_signed(kPi) == Approx(kPi));
    CHECK(wrap_signed(-kPi) == Approx(kPi));
    CHECK(wrap_signed(1.5 * kPi) == Approx(-0.5 * kPi).epsilon(1e-12));
    CHECK(wrap_signed(-0.25) == Approx(-0.25));
    for (double x : {-9.9, 9.9, 3.2, -3.2}) {
        double w = wrap_signed(x);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
    }
}

TEST_CASE("wheel constructors enforce their domains") {
    CHECK_THROWS_AS(WheelConfig::uniform(3), ContractViolation);
    CHECK_THROWS_AS(WheelConfig::uniform(1), ContractViolation);
    CHECK_THROWS_AS(WheelConfig::uniform(0), ContractViolation);
    CHECK_THROWS_AS(WheelConfig::uniform(131072), ContractViolation);
    CHECK_THROWS_AS(WheelConfig::sector(kPi / 2), ContractViolation);
    CHECK_THROWS_AS(WheelConfig::sector(-0.1), ContractViolation);
    CHECK_NOTHROW(WheelConfig::sector(0.0));  // calibration use only

    WheelConfig u16 = WheelConfig::uniform(16);
    CHECK(u16.basis_count == 16);
    CHECK(u16.bits_per_basis == 4);
    CHECK(u16.delta_phi1 == Approx(kPi / 16));

    WheelConfig s = WheelConfig::sector(0.3);
    CHECK(s.basis_count == 2);
    CHECK(s.bits_per_basis == 1);
    CHECK(s.delta_phi1 == 0.3);
}

TEST_CASE("basis_index reads blocks MSB first") {
    WheelConfig cfg = WheelConfig::uniform(8);
    CHECK(basis_index(cfg, Bits{0, 0, 0}) == 0);
    CHECK(basis_index(cfg, Bits{0, 0, 1}) == 1);
    CHECK(basis_index(cfg, Bits{1, 0, 0}) == 4);
    CHECK(basis_index(cfg, Bits{1, 1, 1}) == 7);
    CHECK_THROWS_AS(basis_index(cfg, Bits{1, 0}), ContractViolation);
}

TEST_CASE("uniform basis phases put odd indices on the far half wheel") {
    WheelConfig cfg = WheelConfig::uniform(4);
    CHECK(basis_phase(cfg, 0) == Approx(0.0));
    CHECK(basis_phase(cfg, 1) == Approx(kPi / 4 + kPi));
    CHECK(basis_phase(cfg, 2) == Approx(kPi / 2));
    CHECK(basis_phase(cfg, 3) == Approx(3 * kPi / 4 + kPi));
    CHECK_THROWS_AS(basis_phase(cfg, 4), ContractViolation);
}

TEST_CASE("sector basis phases") {
    WheelConfig cfg = WheelConfig::sector(0.25);
    CHECK(basis_phase(cfg, 0) == Approx(0.0));
    CHECK(basis_phase(cfg, 1) == Approx(0.25 + kPi));
}

TEST_CASE("encode displaces bit 1 by pi and adds the jitter") {
    WheelConfig cfg = WheelConfig::uniform(4);
    CHECK(encode(cfg, 2, 0, 0.0) == Approx(kPi / 2));
    CHECK(encode(cfg, 2, 1, 0.0) == Approx(3 * kPi / 2));
    CHECK(encode(cfg, 0, 0, -0.125) == Approx(kTwoPi - 0.125));
    CHECK_THROWS_AS(encode(cfg, 0, 2, 0.0), ContractViolation);
}

TEST_CASE("noise-free round trip over every basis and bit") {
    for (std::uint32_t m : {2u, 4u, 16u, 256u}) {
        WheelConfig cfg = WheelConfig::uniform(m);
        for (std::uint32_t k = 0; k < m; ++k)
            for (std::uint8_t bit : {0, 1})
                CHECK(decode(cfg, k, encode(cfg, k, bit, 0.0)) == bit);
    }
    WheelConfig s = WheelConfig::sector(0.3);
    for (std::uint32_t k = 0; k < 2; ++k)
        for (std::uint8_t bit : {0, 1}) CHECK(decode(s, k, encode(s, k, bit, 0.0)) == bit);
}

TEST_CASE("decode survives jitter below the half-wheel boundary") {
    WheelConfig cfg = WheelConfig::uniform(16);
    for (double noise : {-1.5, -0.4, 0.4, 1.5})
        for (std::uint32_t k : {0u, 5u, 15u})
            for (std::uint8_t bit : {0, 1})
                CHECK(decode(cfg, k, encode(cfg, k, bit, noise)) == bit);
}

TEST_CASE("decode boundary ties resolve to 0") {
    WheelConfig cfg = WheelConfig::sector(0.0);
    CHECK(decode(cfg, 0, kPi / 2) == 0);
    CHECK(decode(cfg, 0, std::nextafter(kPi / 2, 4.0)) == 1);
}

TEST_CASE("bases_from_key consumes bits_per_basis per symbol") {
    WheelConfig cfg = WheelConfig::uniform(4);
    Bits key{0, 1, 1, 0, 1, 1};
    std::vector<std::uint32_t> bases = bases_from_key(cfg, key, 3);
    REQUIRE(bases.size() == 3);
    CHECK(bases[0] == 1);
    CHECK(bases[1] == 2);
    CHECK(bases[2] == 3);
    CHECK_THROWS_AS(bases_from_key(cfg, key, 2), ContractViolation);
}

TEST_CASE("min_basis_separation") {
    CHECK(min_basis_separation(WheelConfig::sector(0.3)) == Approx(0.3));
    CHECK(min_basis_separation(WheelConfig::uniform(4)) == Approx(kPi / 4));
    CHECK(min_basis_separation(WheelConfig::uniform(512)) == Approx(kPi / 512));
}
