#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holspec/counterexample.hpp"
#include "holspec/norms.hpp"

using namespace holspec;

TEST_CASE("Lp norms of constants") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    CHECK(lp_norm(PotentialField::constant(-1.0), sq, 2.0).value == doctest::Approx(1.0));
    HolderSubgraphDomain half = build_flat_domain(0.5);
    for (double p : {1.0, 2.0, 3.5})
        CHECK(lp_norm(PotentialField::constant(-1.0), half, p).value ==
              doctest::Approx(std::pow(0.5, 1.0 / p)).epsilon(1e-13));
    CHECK(lp_norm(PotentialField::zero(), sq, 2.0).value == 0.0);
}

TEST_CASE("Lp norm of a boundary-singular power") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    // int_0^1 (1-y)^{-1/2} dy = 2
    NormValue nv = lp_norm(PotentialField::h_power(1.0, -0.5), sq, 1.0);
    CHECK(!nv.divergent);
    CHECK(nv.value == doctest::Approx(2.0).epsilon(1e-12));
    // p * sigma <= -1 diverges
    NormValue dv = lp_norm(PotentialField::h_power(1.0, -0.5), sq, 2.0);
    CHECK(dv.divergent);
}

TEST_CASE("weighted seminorm closed forms") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    // V = -1, beta = 1/2, p = 1: int_0^1 h^{-1/2} dh = 2
    NormValue nv = weighted_seminorm(PotentialField::constant(-1.0), sq, 1.0, 0.5);
    CHECK(nv.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(weighted_seminorm(PotentialField::zero(), sq, 1.0, 0.5).value == 0.0);
    // truncated: int_eta^1 h^{-1/2} dh = 2(1 - sqrt(eta))
    NormValue tr = weighted_seminorm(PotentialField::constant(-1.0), sq, 1.0, 0.5, 0.25);
    CHECK(tr.value == doctest::Approx(1.0).epsilon(1e-12));
    // monotone nonincreasing in eta
    CHECK(tr.value <= nv.value);
}

TEST_CASE("seminorm with beta = 0 equals the chart Lp norm") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    for (double p : {1.0, 2.0}) {
        const double a = weighted_seminorm(PotentialField::constant(-0.7), sq, p, 0.0).value;
        const double b = lp_norm(PotentialField::constant(-0.7), sq, p).value;
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("the blow-up potential has an infinite weighted seminorm") {
    ExampleConfig cfg;
    cfg.gamma = 0.6;
    cfg.m = 10;
    cfg.n_max = 1;
    cfg.epsilon = 2.0 / 3.0;  // the borderline exponent
    auto [dom, V] = build_example(cfg);
    ExponentSet es = compute_exponents(2, 0.6, 3.0);
    NormValue nv = weighted_seminorm(V, dom, es.ptilde, es.beta);
    CHECK(nv.divergent);
    CombinedNorm cn = combined_norm(V, dom, es);
    CHECK(cn.divergent);
}

TEST_CASE("Luxemburg norm basics") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    CHECK(orlicz_norm(PotentialField::zero(), sq).value == 0.0);
    // B(u) = (1+u)ln(1+u) - u equals 1 at u = e - 1, so |(-a)|_B = a/(e-1)
    const double e1 = std::exp(1.0) - 1.0;
    for (double a : {1.0, 2.0, 0.25}) {
        NormValue nv = orlicz_norm(PotentialField::constant(-a), sq);
        CHECK(nv.value == doctest::Approx(a / e1).epsilon(1e-7));
        // the root satisfies the modular equation to 1e-8
        const double g = orlicz_modular_region(PotentialField::constant(-a), sq, chart_rect(sq),
                                               nv.value, default_young());
        CHECK(g == doctest::Approx(1.0).epsilon(1e-6));
    }
    // homogeneity of the Luxemburg norm and monotonicity
    const double n1 = orlicz_norm(PotentialField::constant(-1.0), sq).value;
    const double n2 = orlicz_norm(PotentialField::constant(-2.0), sq).value;
    CHECK(n2 >= n1);
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-7));
}

TEST_CASE("combined norm closed form on the flat square") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    ExponentSet es = compute_exponents(2, 0.75, 1.0);
    CombinedNorm cn = combined_norm(PotentialField::constant(-1.0), sq, es);
    CHECK(!cn.divergent);
    const double orl = 1.0 / (std::exp(1.0) - 1.0);
    const double semi = std::pow(1.0 / (1.0 - es.beta), 1.0 / es.ptilde);
    CHECK(cn.bulk == doctest::Approx(orl).epsilon(1e-7));
    CHECK(cn.seminorm == doctest::Approx(semi).epsilon(1e-12));
    CHECK(cn.value == doctest::Approx(orl + semi).epsilon(1e-7));
    CHECK(combined_norm(PotentialField::zero(), sq, es).value == 0.0);
}

TEST_CASE("norm comparison for beta < 1") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    ExponentSet es = compute_exponents(2, 0.75, 1.0);
    CHECK(es.ptilde / (1.0 - es.beta) == doctest::Approx(3.105).epsilon(1e-3));
    double cmax = 0.0, cmin = 1e300;
    for (double a : {1.0, 2.0, 4.0, 8.0}) {
        NormComparison nc = norm_comparison(PotentialField::constant(-a), sq, 3.2, es);
        const double ratio = nc.lhs / nc.rhs;
        cmax = std::max(cmax, ratio);
        cmin = std::min(cmin, ratio);
    }
    // a single constant C works across the family
    CHECK(cmax < 10.0);
    CHECK(cmax / cmin < 1.5);
    // hypothesis violations are rejected
    ExponentSet bad = compute_exponents(2, 0.55, 1.0);  // beta > 1 here
    CHECK(bad.beta > 1.0);
    CHECK_THROWS(norm_comparison(PotentialField::constant(-1.0), sq, 50.0, bad));
    CHECK_THROWS(norm_comparison(PotentialField::constant(-1.0), sq, 3.0, es));  // p too small
}

TEST_CASE("Jensen chain: L^{d/2} below the Lp norm on small domains") {
    HolderSubgraphDomain half = build_flat_domain(0.5);
    for (double p : {2.0, 3.0}) {
        const double l1 = lp_norm(PotentialField::constant(-2.0), half, 1.0).value;
        const double lp = lp_norm(PotentialField::constant(-2.0), half, p).value;
        const double area = 0.5;
        CHECK(l1 <= std::pow(area, 1.0 - 1.0 / p) * lp * (1 + 1e-12));
    }
}

TEST_CASE("divergence slope: convergent constant potential") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    DivergenceSlope ds = divergence_slope(PotentialField::constant(-1.0), sq, 1.0, 0.5,
                                          {1e-1, 1e-2, 1e-3, 1e-4});
    CHECK(!ds.divergent);
    // truncated integral is 2(1 - sqrt(eta))
    for (std::size_t i = 0; i < ds.eta.size(); ++i)
        CHECK(ds.values[i] ==
              doctest::Approx(2.0 * (1.0 - std::sqrt(ds.eta[i]))).epsilon(1e-10));
    CHECK(std::abs(ds.eta_derivative) < 0.05);
}

TEST_CASE("divergence slope: logarithmic blow-up") {
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    DivergenceSlope ds = divergence_slope(PotentialField::h_power(1.0, -0.5), sq, 1.0, 0.5,
                                          {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
    CHECK(ds.divergent);
    // d/d ln(1/eta) of ln(1/eta) is 1
    CHECK(ds.eta_derivative == doctest::Approx(1.0).epsilon(1e-6));
    DivergenceSlope deg = divergence_slope(PotentialField::constant(-1.0), sq, 1.0, 0.5,
                                           {1e-1, 1e-3});
    CHECK(deg.degenerate);
}

TEST_CASE("quadrature paths agree and converge") {
    // tent potential: numeric path against the closed forms
    HolderSubgraphDomain sq = build_flat_domain(1.0);
    PotentialField W = PotentialField::tent2d({0.5, 0.5}, 0.25, 1.0);
    CHECK(lp_norm(W, sq, 1.0).value == doctest::Approx(0.0625).epsilon(1e-8));
    CHECK(lp_norm(W, sq, 2.0).value == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
    // resolution doubling moves a generic singular integral by < 0.5%
    PotentialField V = PotentialField::callable(
        [](const HolderSubgraphDomain& d, Point p) {
            const double h = d.f()(p.x) - p.y;
            return -std::pow(h, -0.5) * (1.0 + 0.2 * p.x);
        },
        -0.5);
    const double v1 = lp_norm(V, sq, 1.0, 1).value;
    const double v2 = lp_norm(V, sq, 1.0, 2).value;
    CHECK(std::abs(v2 - v1) / v2 < 0.005);
    // and matches the exact answer int (1 + 0.2 x) dx * 2 = 2.2
    CHECK(v2 == doctest::Approx(2.2).epsilon(1e-6));
}

TEST_CASE("region integrals against brute force on the fractal") {
    FractalParams p;
    p.gamma = 0.6;
    p.m = 10;
    p.n_max = 1;
    HolderSubgraphDomain dom = build_fractal_domain(p, false);
    const Rect r{0.3, 0.36, 0.1, 0.3};
    const double exact = power_region_integral(dom, r, 0.0, 0.0);  // area of the clip
    // brute force on a fine grid
    double brute = 0.0;
    const int N = 900;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Point q{r.x_lo + (r.x_hi - r.x_lo) * (i + 0.5) / N,
                    r.y_lo + (r.y_hi - r.y_lo) * (j + 0.5) / N};
            if (q.y < dom.f()(q.x)) brute += 1.0;
        }
    brute *= (r.x_hi - r.x_lo) * (r.y_hi - r.y_lo) / double(N) / double(N);
    CHECK(exact == doctest::Approx(brute).epsilon(2e-3));
}
