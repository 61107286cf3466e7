#include "holspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace holspec {

namespace {

GaussRule make_gauss(int n) {
    GaussRule r;
    r.nodes.resize(std::size_t(n));
    r.weights.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess
        double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            pp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[std::size_t(n - 1 - i)] = x;
        r.weights[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("gauss_rule: order must be in [1,16]");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
    return it->second;
}

double pow_anti1(double e, double u) {
    if (std::abs(e + 1.0) < 1e-13) return std::log(u);
    return std::pow(u, e + 1.0) / (e + 1.0);
}

double pow_anti2(double e, double u) {
    if (std::abs(e + 1.0) < 1e-13) return u * std::log(u) - u;
    if (std::abs(e + 2.0) < 1e-13) return std::log(u) / (e + 1.0);
    return std::pow(u, e + 2.0) / ((e + 1.0) * (e + 2.0));
}

double power_poly_integral(double e, std::span<const double> c, double a, double b) {
    if (!(b >= a) || a < 0.0) throw std::invalid_argument("power_poly_integral: bad interval");
    if (a == b) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        const double ek = e + double(k);
        double lower;
        if (a == 0.0) {
            if (ek <= -1.0) throw std::domain_error("power_poly_integral: non-integrable at 0");
            lower = 0.0;
        } else {
            lower = pow_anti1(ek, a);
        }
        s += c[k] * (pow_anti1(ek, b) - lower);
    }
    return s;
}

const TriRule& triangle_rule(int degree) {
    static TriRule deg2{{{2.0 / 3, 1.0 / 6, 1.0 / 6},
                         {1.0 / 6, 2.0 / 3, 1.0 / 6},
                         {1.0 / 6, 1.0 / 6, 2.0 / 3}},
                        {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    static TriRule deg4 = [] {
        TriRule r;
        const double a1 = 0.445948490915965, b1 = 0.108103018168070, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, b2 = 0.816847572980459, w2 = 0.109951743655322;
        auto add3 = [&](double a, double b, double w) {
            r.bary.push_back({b, a, a});
            r.bary.push_back({a, b, a});
            r.bary.push_back({a, a, b});
            r.weights.insert(r.weights.end(), 3, w);
        };
        add3(a1, b1, w1);
        add3(a2, b2, w2);
        return r;
    }();
    if (degree <= 2) return deg2;
    return deg4;
}

}  // namespace holspec
