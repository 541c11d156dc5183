#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "riswpc/specfun.hpp"
#include "riswpc/validation.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace riswpc;

TEST_CASE("log_gamma reference values", "[specfun]") {
    REQUIRE_THAT(specfun::log_gamma(1.0), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(specfun::log_gamma(2.0), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(specfun::log_gamma(0.5), WithinRel(0.5723649429247001, 1e-13));
}

TEST_CASE("log_gamma against extended-precision factorial", "[specfun]") {
    // Gamma(81) = 80!, summed in long double
    long double ln_fact = 0.0L;
    for (int i = 2; i <= 80; ++i) ln_fact += std::log(static_cast<long double>(i));
    REQUIRE_THAT(specfun::log_gamma(81.0), WithinRel(static_cast<double>(ln_fact), 1e-13));
}

TEST_CASE("log_gamma relative accuracy across the working range", "[specfun]") {
    // references from 30-digit arithmetic
    const std::pair<double, double> refs[] = {
        {1e-3, 6.9071788853838536825}, {0.1, 2.2527126517342059599},
        {2.5, 0.28468287047291915963}, {10.0, 12.801827480081469611},
        {100.0, 359.13420536957539878}, {1e4, 82099.717496442377273},
    };
    for (const auto& [x, ref] : refs) {
        REQUIRE_THAT(specfun::log_gamma(x), WithinRel(ref, 1e-12));
    }
}

TEST_CASE("log_gamma recurrence", "[specfun]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(1e-3, 1e4);
    for (int i = 0; i < 200; ++i) {
        const double x = xs(rng);
        const double lg = specfun::log_gamma(x);
        const double lhs = specfun::log_gamma(x + 1.0) - specfun::log_gamma(x);
        // the subtraction cancels ~|log_gamma(x)| of magnitude, so the
        // achievable tolerance scales with it
        const double tol = 1e-12 + 4e-15 * std::fabs(lg);
        REQUIRE_THAT(lhs, WithinAbs(std::log(x), tol * std::max(1.0, std::fabs(std::log(x)))));
    }
}

TEST_CASE("log_gamma domain errors", "[specfun]") {
    REQUIRE_THROWS_AS(specfun::log_gamma(0.0), std::domain_error);
    REQUIRE_THROWS_AS(specfun::log_gamma(-1.5), std::domain_error);
    REQUIRE_THROWS_AS(specfun::log_gamma(std::numeric_limits<double>::quiet_NaN()),
                      std::domain_error);
    REQUIRE_THROWS_AS(specfun::log_gamma(std::numeric_limits<double>::infinity()),
                      std::domain_error);
}

TEST_CASE("regularized lower incomplete gamma basics", "[specfun]") {
    REQUIRE_THAT(specfun::reg_lower_incomplete_gamma(1.0, std::log(2.0)),
                 WithinAbs(0.5, 1e-12));
    for (double k : {0.3, 1.0, 7.5, 120.0}) {
        REQUIRE(specfun::reg_lower_incomplete_gamma(k, 0.0) == 0.0);
    }
    // saturation far above the bulk
    for (double k : {0.5, 1.6, 5.0, 80.5, 200.0}) {
        REQUIRE(specfun::reg_lower_incomplete_gamma(k, 50.0 * k) >= 1.0 - 1e-8);
    }
}

TEST_CASE("incomplete gamma median near the mean for large shape", "[specfun]") {
    const double k = 80.4973;
    const double p = specfun::reg_lower_incomplete_gamma(k, k);
    REQUIRE(p > 0.45);
    REQUIRE(p < 0.55);
    REQUIRE_THAT(validation::gamma_cdf_by_quadrature(k, 1.0, k), WithinAbs(p, 1e-8));
}

TEST_CASE("incomplete gamma is monotone in x", "[specfun]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ks(0.2, 150.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double k = ks(rng);
        double prev = 0.0;
        for (int i = 1; i <= 60; ++i) {
            const double x = k * 3.0 * i / 60.0;
            const double p = specfun::reg_lower_incomplete_gamma(k, x);
            REQUIRE(p >= prev - 1e-13);
            prev = p;
        }
    }
}

TEST_CASE("incomplete gamma recurrence", "[specfun]") {
    // P(k+1,x) = P(k,x) - x^k e^{-x} / Gamma(k+1)
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> ks(0.3, 60.0);
    std::uniform_real_distribution<double> scale(0.2, 2.5);
    for (int i = 0; i < 100; ++i) {
        const double k = ks(rng);
        const double x = k * scale(rng);
        const double lhs = specfun::reg_lower_incomplete_gamma(k + 1.0, x);
        const double rhs = specfun::reg_lower_incomplete_gamma(k, x) -
                           std::exp(k * std::log(x) - x - specfun::log_gamma(k + 1.0));
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-10));
    }
}

TEST_CASE("incomplete gamma derivative equals the density", "[specfun]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ks(0.5, 50.0);
    std::uniform_real_distribution<double> scale(0.7, 1.4);
    for (int i = 0; i < 20; ++i) {
        const double k = ks(rng);
        const double x = k * scale(rng);
        const double h = 3e-5 * std::max(1.0, x);
        const double fd = (specfun::reg_lower_incomplete_gamma(k, x + h) -
                           specfun::reg_lower_incomplete_gamma(k, x - h)) /
                          (2.0 * h);
        const double density = specfun::gamma_pdf({k, 1.0}, x);
        REQUIRE_THAT(fd, WithinRel(density, 1e-6));
    }
}

TEST_CASE("incomplete gamma rejects bad arguments", "[specfun]") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(0.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(-2.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(1.0, -1e-9), std::domain_error);
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(nan, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(1.0, inf), std::domain_error);
    REQUIRE_THROWS_AS(specfun::log_reg_lower_incomplete_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("iteration cap is an error, not a truncation", "[specfun]") {
    REQUIRE_THROWS_AS(specfun::reg_lower_incomplete_gamma(1e12, 1e12), std::runtime_error);
}

TEST_CASE("log form agrees with the linear form and reaches the deep tail", "[specfun]") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ks(0.5, 120.0);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    for (int i = 0; i < 60; ++i) {
        const double k = ks(rng);
        const double x = k * scale(rng);
        const double p = specfun::reg_lower_incomplete_gamma(k, x);
        if (p > 1e-280 && p < 1.0) {
            REQUIRE_THAT(std::exp(specfun::log_reg_lower_incomplete_gamma(k, x)),
                         WithinRel(p, 1e-10));
        }
    }
    // far below the double underflow threshold
    const double lp = specfun::log_reg_lower_incomplete_gamma(161.0, 0.01);
    REQUIRE(std::isfinite(lp));
    REQUIRE(lp < -1000.0);
    REQUIRE(specfun::log_reg_lower_incomplete_gamma(2.0, 0.0) ==
            -std::numeric_limits<double>::infinity());
}

TEST_CASE("gamma density values and limits", "[specfun]") {
    REQUIRE(specfun::gamma_pdf({1.0, 1.0}, 0.0) == 1.0);
    REQUIRE(specfun::gamma_pdf({2.0, 1.0}, 0.0) == 0.0);
    REQUIRE(std::isinf(specfun::gamma_pdf({0.5, 1.0}, 0.0)));
    REQUIRE_THAT(specfun::gamma_pdf({1.0, 2.0}, 0.0), WithinRel(0.5, 1e-12));
    REQUIRE_THROWS_AS(specfun::gamma_pdf({1.0, 1.0}, -1e-12), std::domain_error);
    REQUIRE_THROWS_AS(specfun::gamma_pdf({0.0, 1.0}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(specfun::gamma_pdf({1.0, -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("gamma density integrates to one", "[specfun]") {
    for (auto [k, w] : {std::pair{0.5, 1.0}, {1.6, 0.4878413813377144}, {80.5, 0.4878413813377144}}) {
        const double integral = validation::gamma_cdf_by_quadrature(k, w, 50.0 * w * k);
        REQUIRE_THAT(integral, WithinAbs(1.0, 1e-8));
    }
}
