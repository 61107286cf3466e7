#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace holspec {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points (n in {1,...,16} supported)
const GaussRule& gauss_rule(int n);

template <typename F>
double integrate_gauss(F&& f, double a, double b, int n) {
    const GaussRule& g = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        s += g.weights[i] * f(mid + half * g.nodes[i]);
    return s * half;
}

// Integrate f over [a, b] with a possible power-law singularity at a:
// geometric cells of ratio 2 toward a, Gauss(order) on each, and the last
// sliver [a, a + (b-a) 2^-levels] handled by one extra Gauss cell.
template <typename F>
double integrate_graded(F&& f, double a, double b, int levels = 40, int order = 4) {
    if (!(b > a)) return 0.0;
    const double len = b - a;
    double s = 0.0;
    double hi = 1.0;
    for (int k = 0; k < levels; ++k) {
        const double lo = hi * 0.5;
        s += integrate_gauss(f, a + lo * len, a + hi * len, order);
        hi = lo;
    }
    s += integrate_gauss(f, a, a + hi * len, order);
    return s;
}

// antiderivative of u^e, with the log branch at e = -1
double pow_anti1(double e, double u);
// antiderivative of pow_anti1 (handles e = -1 and e = -2)
double pow_anti2(double e, double u);

// exact integral of u^e * sum_k c[k] u^k over [a, b]; requires a > 0 or
// integrability (e + k > -1) when a == 0
double power_poly_integral(double e, std::span<const double> c, double a, double b);

// symmetric triangle quadrature rules by polynomial degree (4 or 8);
// barycentric points with weights summing to 1
struct TriRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;
};
const TriRule& triangle_rule(int degree);

}  // namespace holspec
