#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holspec/domain.hpp"

using namespace holspec;

namespace {
FractalParams params(double gamma, int m, int n_max) {
    FractalParams p;
    p.gamma = gamma;
    p.m = m;
    p.n_max = n_max;
    return p;
}
}  // namespace

TEST_CASE("fractal boundary closed-form values") {
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 3));
    // midpoint: only the first tent contributes
    CHECK(f(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    // x = 2^{-m-1}: first and second layers contribute
    const double x = std::exp2(-11);
    const double expected = x + std::exp2(-0.6 * 10) * 0.5;
    CHECK(f(x) == doctest::Approx(expected).epsilon(1e-14));
    // f_{-1} is identically zero
    CHECK(f.eval_level(0.3737, -1) == 0.0);
    CHECK_THROWS(f(1.5));
}

TEST_CASE("fractal parameter constraints") {
    CHECK_THROWS(BoundaryFunction::fractal(params(0.6, 5, 1)));   // m(1-gamma) < 4
    CHECK_THROWS(BoundaryFunction::fractal(params(0.95, 20, 1)));  // m(1-gamma) = 1 < 4
    CHECK_THROWS(BoundaryFunction::fractal(params(0.4, 10, 1)));  // gamma <= 1/2
    CHECK_NOTHROW(BoundaryFunction::fractal(params(0.6, 10, 0)));
}

TEST_CASE("spike bases") {
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 2));
    CHECK(f.spike_base(0, 0) == 0.0);  // sup of f_{-1}
    // cell [0, 2^-m]: f_0 rises linearly, sup at the right endpoint
    CHECK(f.spike_base(1, 0) == doctest::Approx(std::exp2(-10)).epsilon(1e-15));
    // cell adjacent to the apex of the first tent
    CHECK(f.spike_base(1, std::int64_t(1) << 9) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS(f.spike_base(1, -1));
    CHECK_THROWS(f.spike_base(1, std::int64_t(1) << 10));
}

TEST_CASE("breakpoint values are bit-exact and pieces reproduce evals") {
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 1));
    const std::size_t nb = f.num_breakpoints();
    CHECK(nb == (std::size_t(1) << 11) + 1);
    for (std::size_t i : {std::size_t(0), nb / 3, nb / 2, nb - 1}) {
        CHECK(f.breakpoint_value(i) == f(f.breakpoint_x(i)));
    }
    // piece endpoints agree with direct evaluation, and lerp matches f inside
    f.for_each_piece(0.25, 0.2505, [&](double x0, double x1, double f0, double f1) {
        CHECK(f0 == f(x0));
        CHECK(f1 == f(x1));
        const double xm = 0.5 * (x0 + x1);
        const double lerp = f0 + (f1 - f0) * (xm - x0) / (x1 - x0);
        CHECK(f(xm) == doctest::Approx(lerp).epsilon(1e-12));
    });
}

TEST_CASE("spike window inequalities by exact breakpoint scan") {
    // (1/8) 2^{-gamma m n} <= f - a_{n,k} on the middle window, <= 2^{-gamma m n} on the cell
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 1));
    for (int n : {0, 1}) {
        const std::int64_t kn = f.num_cells(n);
        const double w = f.cell_width(n);
        const double upper = std::exp2(-0.6 * 10 * n);
        const double lower = upper / 8.0;
        const std::int64_t step = std::max<std::int64_t>(1, kn / 64);
        for (std::int64_t k = 0; k < kn; k += step) {
            const double a = f.spike_base(n, k);
            const double x0 = double(k) * w, x1 = double(k + 1) * w;
            // full-cell upper bound
            CHECK(f.range_max(x0, x1) - a <= upper * (1 + 1e-12));
            // middle-window lower bound
            const double m0 = x0 + 0.25 * w, m1 = x0 + 0.75 * w;
            double min_middle = std::min(f(m0), f(m1));
            f.for_each_piece(m0, m1, [&](double, double px1, double, double fv1) {
                if (px1 < m1) min_middle = std::min(min_middle, fv1);
            });
            CHECK(min_middle - a >= lower * (1 - 1e-12));
        }
    }
}

TEST_CASE("Hoelder ratio of the fractal stays below 3") {
    FractalParams p = params(0.6, 10, 3);
    HolderSubgraphDomain dom = build_fractal_domain(p, false);
    const double worst = dom.holder_check(100000, 20240601);
    CHECK(worst <= 3.0);
    CHECK(worst > 0.5);  // the bound is not vacuous
}

TEST_CASE("oscillation of the base layer inside one cell") {
    // |f_{n-1}(x) - f_{n-1}(y)| <= (1/8) 2^{-gamma m n} within Q(n,k)
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 2));
    for (int n : {1, 2}) {
        const double w = f.cell_width(n);
        const double bound = std::exp2(-0.6 * 10 * n) / 8.0;
        for (std::int64_t k : {std::int64_t(0), std::int64_t(17), f.num_cells(n) / 2}) {
            const double x0 = double(k) * w, x1 = double(k + 1) * w;
            const double lo = std::min(f.eval_level(x0, n - 1), f.eval_level(x1, n - 1));
            const double hi = std::max(f.eval_level(x0, n - 1), f.eval_level(x1, n - 1));
            CHECK(hi - lo <= bound * (1 + 1e-12));
        }
    }
}

TEST_CASE("flat domain basics") {
    HolderSubgraphDomain dom = build_flat_domain(1.0);
    CHECK(dom.area() == doctest::Approx(1.0));
    CHECK(dom.h_at({0.3, 0.25}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(dom.holder_check(1000, 7) == 0.0);
    CHECK(dom.inside({0.5, 0.5}));
    CHECK(!dom.inside({0.5, 1.5}));
    CHECK_THROWS_AS(dom.h_at({0.3, -0.5}), std::domain_error);  // chart miss
    CHECK(dom.dist_to_boundary({0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dom.dist_to_boundary({0.1, 0.4}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("sampled triangle-roof domain") {
    HolderSubgraphDomain dom = build_sampled_domain({{0.0, 0.5}, {0.5, 1.0}, {1.0, 0.5}}, 1.0, 1.0);
    CHECK(dom.f()(0.25) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(dom.area() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("fractal domain with base box") {
    FractalParams p = params(0.6, 10, 1);
    HolderSubgraphDomain dom = build_fractal_domain(p, true);
    CHECK(dom.has_base_box());
    // area = base box + closed-form integral of the two tent layers
    const double chart = 0.25 * (1.0 + std::exp2(-6.0));
    CHECK(dom.area() == doctest::Approx(8.0 + chart).epsilon(1e-14));
    CHECK(dom.inside({0.5, -1.0}));
    CHECK(dom.inside({0.5, 0.25}));
    CHECK(dom.h_at({0.5, 0.25}) == doctest::Approx(0.25).epsilon(1e-13));
    // h_omega default: a quarter of min f over the middle window
    CHECK(dom.h_omega() > 0.0);
    CHECK(dom.h_omega() <= 0.25 * dom.f()(0.25) * (1 + 1e-12));
    // truncation tail is reported and small
    const double tail = dom.truncation_tail();
    const double r = std::exp2(-6.0);
    CHECK(tail == doctest::Approx(0.5 * r * r / (1.0 - r)).epsilon(1e-13));
}

TEST_CASE("chart layer membership near the graph") {
    FractalParams p = params(0.6, 10, 1);
    HolderSubgraphDomain dom = build_fractal_domain(p, false);
    const double h = dom.h_omega();
    // points just below the graph over the middle window belong to the layer
    for (double x : {0.3, 0.5, 0.62}) {
        const double fx = dom.f()(x);
        if (fx > h * 3.0) {
            Point pt{x, fx - 1e-4};
            CHECK(dom.in_chart_layer(pt));
        }
    }
    CHECK(!dom.in_chart_layer({0.5, h / 2}));     // below the layer floor
    CHECK(!dom.in_chart_layer({h / 2, 2 * h}));   // too close to the chart edge
}

TEST_CASE("range queries match brute-force scans") {
    BoundaryFunction f = BoundaryFunction::fractal(params(0.6, 10, 1));
    for (auto [a, b] : {std::pair{0.2, 0.21}, {0.49, 0.52}, {0.0, 1.0}}) {
        double lo = 1e300, hi = -1e300;
        const int N = 4096;
        for (int i = 0; i <= N; ++i) {
            const double x = a + (b - a) * i / N;
            lo = std::min(lo, f(x));
            hi = std::max(hi, f(x));
        }
        CHECK(f.range_max(a, b) >= hi - 1e-12);
        CHECK(f.range_min(a, b) <= lo + 1e-12);
        CHECK(f.range_max(a, b) <= hi + std::exp2(-10));  // within one grid cell of the scan
    }
}
