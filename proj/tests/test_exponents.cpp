#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holspec/exponents.hpp"

using namespace holspec;

TEST_CASE("closed forms at gamma = 1/2, d = 2") {
    ExponentSet es = compute_exponents(2, 0.5, 1.0);
    CHECK(es.mu == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(es.beta == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(es.ptilde == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("gamma = 1 collapses to the Lipschitz endpoint") {
    ExponentSet es = compute_exponents(2, 1.0, 1.0);
    CHECK(es.beta == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(es.ptilde == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gamma = 0.75 values and identities") {
    ExponentSet es = compute_exponents(2, 0.75, 1.0);
    CHECK(es.mu == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(es.ptilde == doctest::Approx(49.0 / 36.0).epsilon(1e-13));
    CHECK(es.beta == doctest::Approx(91.0 / 162.0).epsilon(1e-13));
    CHECK(1.0 / es.sprime == doctest::Approx(13.0 / 67.0).epsilon(1e-13));
    CHECK(1.0 / es.s == doctest::Approx(54.0 / 67.0).epsilon(1e-13));
    CHECK(es.omega == doctest::Approx(91.0 / 201.0).epsilon(1e-13));
    CHECK(es.zeta == doctest::Approx(6750.0 / 10854.0).epsilon(1e-12));
    CHECK(es.qstar == doctest::Approx(14.0).epsilon(1e-13));

    IdentityReport rep = verify_exponent_identities(es);
    CHECK(rep.ok);
    CHECK(rep.r_conjugate < 1e-12);
    CHECK(rep.r_omega_sprime < 1e-12);
    CHECK(rep.r_omega_s < 1e-12);
    CHECK(rep.r_counting < 1e-12);
}

TEST_CASE("identities across the d-gamma grid") {
    for (int d = 2; d <= 6; ++d) {
        const double g0 = double(d - 1) / d;
        for (int i = 0; i < 20; ++i) {
            const double g = g0 + i * (1.0 - g0) / 20.0;
            ExponentSet es = compute_exponents(d, g, 1.0);
            IdentityReport rep = verify_exponent_identities(es);
            CAPTURE(d);
            CAPTURE(g);
            CHECK(rep.ok);
            CHECK(es.mu > double(d));
            CHECK(es.mu <= double(d) + 1.0 + 1e-12);
            CHECK(es.ptilde > 0.5 * d);
            CHECK(es.beta > 0.0);
        }
        // boundary case of the zeta margin
        ExponentSet es = compute_exponents(d, g0, 1.0);
        CHECK(verify_exponent_identities(es).zeta_margin > 0.0);
    }
}

TEST_CASE("identities at gamma = 2/3 for d = 3") {
    ExponentSet es = compute_exponents(3, 2.0 / 3.0, 1.0);
    IdentityReport rep = verify_exponent_identities(es);
    CHECK(rep.ok);
    CHECK(rep.r_conjugate < 1e-12);
    CHECK(rep.r_counting < 1e-12);
}

TEST_CASE("beta stays below one from the threshold gamma on") {
    for (int d = 2; d <= 6; ++d) {
        const double gt = 2.0 * (d - 1) / (2.0 * d - 1.0);
        for (int i = 0; i <= 20; ++i) {
            const double g = gt + i * (1.0 - gt) / 20.0;
            if (g > 1.0) break;
            ExponentSet es = compute_exponents(d, std::min(g, 1.0), 1.0);
            CAPTURE(d);
            CAPTURE(g);
            CHECK(es.beta < 1.0);
        }
    }
    // d = 2 threshold value from the chain of estimates
    ExponentSet es = compute_exponents(2, 2.0 / 3.0, 1.0);
    CHECK(es.beta == doctest::Approx(0.9375).epsilon(1e-13));
    CHECK(es.ptilde / (1.0 - es.beta) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("ptilde and beta approach the Lipschitz limits") {
    double prev_p = 1e9, prev_b = 1e9;
    for (double g : {0.9, 0.99, 0.999, 0.9999}) {
        ExponentSet es = compute_exponents(2, g, 1.0);
        CHECK(es.ptilde < prev_p);
        CHECK(es.beta < prev_b);
        prev_p = es.ptilde;
        prev_b = es.beta;
    }
    CHECK(prev_p == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(prev_b == doctest::Approx(0.0).epsilon(1e-2));
}

TEST_CASE("c0 takes the smallest branch and shrinks with c") {
    double prev = 1e300;
    for (double c : {0.25, 1.0, 3.0, 10.0}) {
        ExponentSet es = compute_exponents(2, 0.7, c);
        const double b1 = 1.0 / 16.0;
        const double b2 = std::pow(2.0, 0.7) / (64.0 * c);
        const double b3 = 1.0 / (std::pow(2.0, 3.7) * c);
        CHECK(es.c0 <= std::pow(b1, 1.0 / 0.7) * (1 + 1e-12));
        CHECK(es.c0 <= std::pow(b2, 1.0 / 0.7) * (1 + 1e-12));
        CHECK(es.c0 <= std::pow(b3, 1.0 / 0.7) * (1 + 1e-12));
        CHECK(es.c0 <= prev);
        CHECK(es.c2 == doctest::Approx(es.c0 * std::pow(16.0, 1.0 / 0.7)).epsilon(1e-13));
        prev = es.c0;
    }
    // the worked constant for c = 3, gamma = 0.7
    ExponentSet es = compute_exponents(2, 0.7, 3.0);
    CHECK(es.c0 == doctest::Approx(1.094e-3).epsilon(2e-3));
}

TEST_CASE("delta0 branches") {
    CHECK(delta0(9.0, 0.5, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(delta0(0.0, 0.5, 2) == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(delta0(1.0, 0.9, 2) == doctest::Approx(0.63640).epsilon(1e-4));
    CHECK(delta0(1e9, 0.5, 2) <= 1.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS(compute_exponents(1, 0.5, 1.0));
    CHECK_THROWS(compute_exponents(2, 0.0, 1.0));
    CHECK_THROWS(compute_exponents(2, 1.5, 1.0));
    CHECK_THROWS(compute_exponents(2, 0.5, 0.0));
    CHECK_THROWS(delta0(-1.0, 0.5, 2));
    CHECK_THROWS(delta0(1.0, 1.5, 2));
}
