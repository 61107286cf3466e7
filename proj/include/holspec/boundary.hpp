#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace holspec {

// Parameters of the oscillating boundary function built from stacked tent
// layers: f_n = sum_{j<=n} 2^{-gamma*m*j} g_j, where g_j is a train of tents
// of width 2^{-jm}.  m*gamma >= 1 and m*(1-gamma) >= 4 keep the layers
// summable and the Hoelder constant uniform.
struct FractalParams {
    double gamma = 0.6;  // in ((d-1)/d, 1) for d = 2
    int m = 10;
    int n_max = 1;       // truncation level; the boundary is an exact polygon
    int d = 2;
};

// A nonnegative piecewise-linear function on [x_lo, x_hi].  Fractal boundaries
// keep their analytic structure (values are evaluated in closed form, the
// breakpoint grid is uniform and implicit); flat and sampled boundaries store
// their breakpoints explicitly.
class BoundaryFunction {
public:
    static BoundaryFunction fractal(const FractalParams& p);
    static BoundaryFunction flat(double height, double x_lo = 0.0, double x_hi = 1.0);
    static BoundaryFunction samples(std::vector<std::pair<double, double>> pts);

    bool is_fractal() const { return kind_ == Kind::Fractal; }
    const FractalParams& fractal_params() const { return fp_; }

    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }

    // f(x); x must lie in [x_lo, x_hi]
    double operator()(double x) const;

    // Fractal partial sum f_level(x); level = -1 gives 0, level >= n_max the
    // full truncated series.
    double eval_level(double x, int level) const;

    // exact piecewise-linear structure
    std::size_t num_breakpoints() const;
    double breakpoint_x(std::size_t i) const;
    double breakpoint_value(std::size_t i) const;

    // extremes of f over [a,b] intersected with the support interval; exact
    // (piecewise-linear functions attain extremes at breakpoints or interval
    // endpoints)
    double range_max(double a, double b) const;
    double range_min(double a, double b) const;

    // same, for a partial sum f_level (fractal only)
    double range_max_level(double a, double b, int level) const;

    // visit the linear pieces of f covering [a,b] (clipped); fn receives
    // (x0, x1, f(x0), f(x1))
    void for_each_piece(double a, double b,
                        const std::function<void(double, double, double, double)>& fn) const;

    double max_value() const { return range_max(x_lo_, x_hi_); }

    // closed-form integral of f over its support
    double integral() const;

    // Bound on the truncation tail f_infty - f_{n_max} (zero for non-fractal
    // boundaries); everything downstream treats the polygon as exact and only
    // reports this number.
    double truncation_tail() const;

    // fractal cell combinatorics: cells Q(n,k) = [k 2^{-nm}, (k+1) 2^{-nm}]
    std::int64_t num_cells(int n) const;        // 2^{nm}
    double cell_width(int n) const;             // 2^{-nm}
    // sup of f_{n-1} over the closed cell Q(n,k)
    double spike_base(int n, std::int64_t k) const;
    // slope of f_{n-1} on Q(n,k) (f_{n-1} is linear there)
    double base_slope(int n, std::int64_t k) const;

private:
    enum class Kind { Fractal, Table };
    Kind kind_ = Kind::Table;
    FractalParams fp_;
    std::vector<std::pair<double, double>> pts_;  // Table: sorted breakpoints
    double x_lo_ = 0.0;
    double x_hi_ = 1.0;
    double grid_ = 0.0;   // Fractal: uniform breakpoint spacing 2^{-(n_max*m+1)}
    std::int64_t ncells_ = 0;  // Fractal: number of grid cells

    double eval_fractal(double x, int level) const;
    double eval_table(double x) const;
};

}  // namespace holspec
