#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "riswpc/channel.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace riswpc;

namespace {

ChannelRealization fixed_realization(std::uint64_t seed, std::size_t m) {
    std::mt19937_64 rng(seed);
    return sample_channel(m, rng);
}

} // namespace

TEST_CASE("channel draws are deterministic in (seed, position)", "[channel]") {
    const auto a = fixed_realization(42, 50);
    const auto b = fixed_realization(42, 50);
    REQUIRE(a.size() == 50);
    REQUIRE(a.h_ur.size() == 50);
    REQUIRE(a.h_br == b.h_br);
    REQUIRE(a.h_ur == b.h_ur);
    REQUIRE(fixed_realization(42, 8).h_br != fixed_realization(43, 8).h_br);
}

TEST_CASE("sample_channel rejects zero elements", "[channel]") {
    std::mt19937_64 rng(1);
    REQUIRE_THROWS_AS(sample_channel(0, rng), std::invalid_argument);
}

TEST_CASE("entry statistics match the unit-variance Rayleigh model", "[channel]") {
    std::mt19937_64 rng(123);
    const std::size_t n = 1'000'000;
    double sum_mag = 0.0, sum_mag2 = 0.0, sum_mag4 = 0.0;
    std::complex<double> sum_h{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> h = sample_cn01(rng);
        const double mag = std::abs(h);
        sum_h += h;
        sum_mag += mag;
        sum_mag2 += mag * mag;
        sum_mag4 += mag * mag * mag * mag;
    }
    const double nd = static_cast<double>(n);
    const double mean_mag = sum_mag / nd;
    const double mean_mag2 = sum_mag2 / nd;

    // zero mean: E|sum/n|^2 = 1/n
    REQUIRE(std::abs(sum_h / nd) < 4.0 / std::sqrt(nd));

    // E|h| = sqrt(pi)/2, Var|h| = 1 - pi/4
    const double se_mag = std::sqrt((1.0 - std::numbers::pi / 4.0) / nd);
    REQUIRE_THAT(mean_mag, WithinAbs(std::sqrt(std::numbers::pi) / 2.0, 3.0 * se_mag));

    // E|h|^2 = 1, Var|h|^2 = 1
    const double se_mag2 = std::sqrt((sum_mag4 / nd - mean_mag2 * mean_mag2) / nd);
    REQUIRE_THAT(mean_mag2, WithinAbs(1.0, 3.0 * se_mag2));
    REQUIRE(std::fabs(mean_mag2 - 1.0) < 0.01);
}

TEST_CASE("aligned phases cancel the cascade phase", "[channel]") {
    SECTION("already aligned entries keep phase zero") {
        ChannelRealization ch{{{1.0, 0.0}}, {{1.0, 0.0}}};
        const RisConfig ris = aligned_phases(ch);
        REQUIRE(ris.beta == std::vector<double>{1.0});
        REQUIRE_THAT(ris.theta[0], WithinAbs(0.0, 1e-15));
    }
    SECTION("single rotated pair becomes real") {
        const std::complex<double> h_br = std::polar(1.0, std::numbers::pi / 3.0);
        const std::complex<double> h_ur = std::polar(1.0, std::numbers::pi / 6.0);
        ChannelRealization ch{{h_br}, {h_ur}};
        const std::complex<double> cascade = cascade_response(ch, aligned_phases(ch));
        REQUIRE(std::fabs(cascade.imag()) < 1e-12);
        REQUIRE_THAT(cascade.real(), WithinRel(1.0, 1e-12));
    }
    SECTION("zero-magnitude entries get phase zero") {
        ChannelRealization ch{{{0.0, 0.0}, {1.0, 1.0}}, {{3.0, -2.0}, {0.5, 0.25}}};
        const RisConfig ris = aligned_phases(ch);
        REQUIRE(ris.theta[0] == 0.0);
    }
    SECTION("aligned cascade equals the magnitude sum") {
        std::mt19937_64 rng(7);
        const auto ch = sample_channel(8, rng);
        const auto ris = aligned_phases(ch);
        for (double th : ris.theta) {
            REQUIRE(th >= 0.0);
            REQUIRE(th < 2.0 * std::numbers::pi);
        }
        REQUIRE_THAT(std::abs(cascade_response(ch, ris)), WithinRel(cascade_sum(ch), 1e-10));
    }
}

TEST_CASE("aligned configuration attains the triangle-inequality bound", "[channel]") {
    std::mt19937_64 rng(31);
    const auto ch = sample_channel(16, rng);
    const double best = cascade_sum(ch);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 50; ++trial) {
        RisConfig alt;
        alt.beta.assign(16, 1.0);
        alt.theta.resize(16);
        for (double& th : alt.theta) th = phase(rng);
        REQUIRE(std::abs(cascade_response(ch, alt)) <= best + 1e-10);
    }
}

TEST_CASE("cascade_sum closed cases", "[channel]") {
    ChannelRealization unit;
    unit.h_br.assign(50, {1.0, 0.0});
    unit.h_ur.assign(50, {1.0, 0.0});
    REQUIRE_THAT(cascade_sum(unit), WithinRel(50.0, 1e-14));

    ChannelRealization pair{{{0.5, 0.0}}, {{0.8, 0.0}}};
    REQUIRE_THAT(cascade_sum(pair), WithinRel(0.4, 1e-14));

    ChannelRealization ragged{{{1.0, 0.0}}, {}};
    REQUIRE_THROWS_AS(cascade_sum(ragged), std::invalid_argument);
}

TEST_CASE("cascade sum statistics at M=50", "[channel]") {
    std::mt19937_64 rng(97);
    const std::size_t trials = 100'000;
    ChannelRealization scratch;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
        sample_channel_into(scratch, 50, rng);
        const double t = cascade_sum(scratch);
        sum += t;
        sum2 += t * t;
    }
    const double nd = static_cast<double>(trials);
    const double mean = sum / nd;
    const double var = (sum2 - sum * sum / nd) / (nd - 1.0);

    const double expected_mean = 50.0 * std::numbers::pi / 4.0;
    const double expected_var = 50.0 * (1.0 - std::numbers::pi * std::numbers::pi / 16.0);
    const double se_mean = std::sqrt(var / nd);
    REQUIRE_THAT(mean, WithinAbs(expected_mean, 3.0 * se_mean));
    // std err of the sample variance for a near-Gaussian sum: ~ var * sqrt(2/n)
    REQUIRE_THAT(var, WithinAbs(expected_var, 3.0 * expected_var * std::sqrt(2.0 / nd)));
}

TEST_CASE("harvested energy", "[channel]") {
    SystemParams p;
    REQUIRE(harvested_energy(p, 0.0) == 0.0);

    p.p_b_dbm = watts_to_dbm(0.010);
    REQUIRE_THAT(harvested_energy(p, 2.0), WithinRel(0.0136, 1e-9));

    const double e1 = harvested_energy(p, 1.7);
    REQUIRE_THAT(harvested_energy(p, 3.4), WithinRel(4.0 * e1, 1e-12));
    REQUIRE_THROWS_AS(harvested_energy(p, -1.0), std::invalid_argument);
}

TEST_CASE("instantaneous SNR follows the fourth-power law", "[channel]") {
    SystemParams p;
    p.sigma2_dbm = 30.0; // 1 W noise
    p.p_b_dbm = watts_to_dbm((1.0 - p.alpha) / (p.eta * p.alpha)); // p_e = 1

    SECTION("unit case") {
        REQUIRE_THAT(instantaneous_snr(p, 1.0), WithinRel(1.0, 1e-9));
    }
    SECTION("doubling t scales SNR by sixteen") {
        const double z = instantaneous_snr(p, 1.3);
        REQUIRE_THAT(instantaneous_snr(p, 2.6), WithinRel(16.0 * z, 1e-12));
    }
    SECTION("p_e = 10, zeta = 0.1, t = 3") {
        SystemParams q = p;
        q.p_b_dbm = watts_to_dbm(10.0 * (1.0 - q.alpha) / (q.eta * q.alpha));
        q.zeta = 0.1;
        REQUIRE_THAT(instantaneous_snr(q, 3.0), WithinRel(8.1, 1e-9));
    }
    SECTION("invariant under a common phase rotation of h_br") {
        std::mt19937_64 rng(41);
        auto ch = sample_channel(12, rng);
        const double z = instantaneous_snr(p, cascade_sum(ch));
        const auto rot = std::polar(1.0, 1.234);
        for (auto& h : ch.h_br) h *= rot;
        REQUIRE_THAT(instantaneous_snr(p, cascade_sum(ch)), WithinRel(z, 1e-10));
    }
}
