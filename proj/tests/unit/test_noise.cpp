#include <doctest.h>

#include <cmath>
#include <noisekey/constellation.hpp>
#include <noisekey/errors.hpp>
#include <noisekey/noise.hpp>

#include "support/oracles.hpp"

using namespace noisekey;
using doctest::Approx;

TEST_CASE("seeded sources replay bit for bit") {
    EntropySource a = EntropySource::seeded(7);
    EntropySource b = EntropySource::seeded(7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("fresh_bit is the top bit of one draw") {
    EntropySource a = EntropySource::seeded(11);
    EntropySource b = EntropySource::seeded(11);
    for (int i = 0; i < 200; ++i) CHECK(a.fresh_bit() == static_cast<std::uint8_t>(b.next_u64() >> 63));
}

TEST_CASE("fresh_bits consumes one draw per bit") {
    EntropySource a = EntropySource::seeded(5);
    EntropySource b = EntropySource::seeded(5);
    Bits bits = a.fresh_bits(17);
    REQUIRE(bits.size() == 17);
    for (int i = 0; i < 17; ++i) b.next_u64();
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("normal consumes exactly two draws and matches the written-out form") {
    EntropySource a = EntropySource::seeded(99);
    EntropySource b = EntropySource::seeded(99);
    double sigma = 0.37;
    double z = a.normal(sigma);
    std::uint64_t w1 = b.next_u64();
    std::uint64_t w2 = b.next_u64();
    CHECK(z == oracles::box_muller_cos(w1, w2, sigma));
    // Streams stay aligned afterwards.
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("normal with sigma zero consumes nothing") {
    EntropySource a = EntropySource::seeded(3);
    EntropySource b = EntropySource::seeded(3);
    CHECK(a.normal(0.0) == 0.0);
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("normal rejects spreads outside [0, pi/2)") {
    EntropySource src = EntropySource::seeded(1);
    CHECK_THROWS_AS(src.normal(-0.1), DomainError);
    CHECK_THROWS_AS(src.normal(kPi / 2), DomainError);
}

TEST_CASE("normal sample moments at sigma 0.5") {
    EntropySource src = EntropySource::seeded(2024);
    std::vector<double> xs(200000);
    for (double& x : xs) x = src.normal(0.5);
    oracles::MeanStd ms = oracles::mean_std(xs);
    // 3 sigma bands for the mean and (loose) for the std of 2e5 samples.
    CHECK(std::abs(ms.mean) < 3 * 0.5 / std::sqrt(200000.0));
    CHECK(ms.std_dev == Approx(0.5).epsilon(0.01));
}

TEST_CASE("sigma_from_photons") {
    CHECK(sigma_from_photons(8.0) == Approx(0.5));
    CHECK(sigma_from_photons(200.0) == Approx(0.1));
    CHECK(sigma_from_photons(2.0) == Approx(1.0));
    CHECK_THROWS_AS(sigma_from_photons(0.81), DomainError);  // spread would hit pi/2
    CHECK_THROWS_AS(sigma_from_photons(0.0), DomainError);
    CHECK_THROWS_AS(sigma_from_photons(-1.0), DomainError);
}

TEST_CASE("sigma_from_coverage") {
    CHECK(sigma_from_coverage(2.0, 16) == Approx(2.0 * kPi / 16));
    CHECK(sigma_from_coverage(0.5, 4) == Approx(kPi / 8));
    CHECK_THROWS_AS(sigma_from_coverage(8.0, 16), DomainError);   // n_sigma = m/2
    CHECK_THROWS_AS(sigma_from_coverage(0.0, 16), DomainError);
    CHECK_THROWS_AS(sigma_from_coverage(1.0, 1), ContractViolation);
}

TEST_CASE("gaussian_tail_q reference points") {
    CHECK(gaussian_tail_q(0.0) == Approx(0.5));
    CHECK(gaussian_tail_q(2.0) == Approx(0.02275013194817922).epsilon(1e-12));
    CHECK(gaussian_tail_q(-1.0) == Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(gaussian_tail_q(1.0) + gaussian_tail_q(-1.0) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bob_error_probability closed-form points") {
    CHECK(bob_error_probability(0.0) == 0.0);
    // sigma = pi/4 puts the half-wheel boundary at 2 sigma; the first alias
    // term dominates and the sum is barely above 2 Q(2).
    CHECK(bob_error_probability(kPi / 4) == Approx(0.04550026192318315).epsilon(1e-12));
    // The alias tail subtracts, so the sum sits just under 2 Q(2).
    CHECK(bob_error_probability(kPi / 4) <= 2 * gaussian_tail_q(2.0));
    CHECK(bob_error_probability(kPi / 4) == Approx(2 * gaussian_tail_q(2.0)).epsilon(1e-4));
    CHECK(bob_error_probability(kPi / 8) == Approx(6.334248366623993e-05).epsilon(1e-9));
    CHECK(bob_error_probability(0.5) == Approx(0.0016803163365267499).epsilon(1e-9));
    CHECK(bob_error_probability(0.1) < 1e-50);
}

TEST_CASE("bob_error_probability is monotone in the spread") {
    double prev = 0.0;
    for (double s : {0.1, 0.3, 0.5, 0.8, 1.1, 1.4}) {
        double p = bob_error_probability(s);
        CHECK(p > prev);
        prev = p;
    }
    CHECK_THROWS_AS(bob_error_probability(kPi / 2), DomainError);
    CHECK_THROWS_AS(bob_error_probability(-0.2), DomainError);
}

TEST_CASE("empirical error rate tracks the analytic curve") {
    WheelConfig cfg = WheelConfig::sector(0.1);
    EntropySource src = EntropySource::seeded(31337);
    for (double sigma : {kPi / 4, 0.5}) {
        const std::size_t n = 200000;
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t k = src.fresh_bit();
            std::uint8_t bit = src.fresh_bit();
            double y = encode(cfg, k, bit, src.normal(sigma));
            if (decode(cfg, k, y) != bit) ++errors;
        }
        double p = bob_error_probability(sigma);
        double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
        double emp = static_cast<double>(errors) / static_cast<double>(n);
        CHECK(std::abs(emp - p) < 3.5 * se);
    }
}
