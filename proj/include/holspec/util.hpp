#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace holspec {

inline double sqr(double x) { return x * x; }

// Sum in fixed (index) order so parallel producers + this reducer give
// run-to-run identical results.
inline double ordered_sum(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;
};

// Least-squares fit of y against x.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    LineFit fit;
    const size_t n = x.size();
    if (n < 2 || y.size() != n) {
        fit.degenerate = true;
        return fit;
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n); my /= double(n);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        fit.degenerate = true;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

// Median of pairwise slopes; robust against a single bad grid point.
inline LineFit theil_sen(std::span<const double> x, std::span<const double> y) {
    LineFit fit;
    const size_t n = x.size();
    if (n < 2 || y.size() != n) {
        fit.degenerate = true;
        return fit;
    }
    std::vector<double> slopes;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    if (slopes.empty()) {
        fit.degenerate = true;
        return fit;
    }
    std::sort(slopes.begin(), slopes.end());
    const size_t m = slopes.size();
    fit.slope = (m % 2 == 1) ? slopes[m / 2] : 0.5 * (slopes[m / 2 - 1] + slopes[m / 2]);
    std::vector<double> res(n);
    for (size_t i = 0; i < n; ++i) res[i] = y[i] - fit.slope * x[i];
    std::sort(res.begin(), res.end());
    fit.intercept = (n % 2 == 1) ? res[n / 2] : 0.5 * (res[n / 2 - 1] + res[n / 2]);
    return fit;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// FNV-1a, used to tag output artifacts with their configuration.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex8(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 7; i >= 0; --i) {
        out[size_t(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace holspec
