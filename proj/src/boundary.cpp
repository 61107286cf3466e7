#include "holspec/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holspec {

namespace {

// tent on [0,1]: 1/2 - |t - 1/2|, zero outside
inline double tent(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 0.5 - std::abs(t - 0.5);
}

}  // namespace

BoundaryFunction BoundaryFunction::fractal(const FractalParams& p) {
    if (!(p.gamma > 0.5) || !(p.gamma < 1.0))
        throw std::invalid_argument("fractal boundary: gamma must be in (1/2, 1) for d=2");
    if (p.d != 2) throw std::invalid_argument("fractal boundary: geometry is d=2 only");
    if (p.m * p.gamma < 1.0 || p.m * (1.0 - p.gamma) < 4.0)
        throw std::invalid_argument("fractal boundary: need m*gamma >= 1 and m*(1-gamma) >= 4");
    if (p.n_max < 0) throw std::invalid_argument("fractal boundary: n_max must be >= 0");
    if (p.n_max * p.m + 1 > 40)
        throw std::invalid_argument("fractal boundary: breakpoint grid beyond 2^40 is not desk scale");
    BoundaryFunction b;
    b.kind_ = Kind::Fractal;
    b.fp_ = p;
    b.x_lo_ = 0.0;
    b.x_hi_ = 1.0;
    b.ncells_ = std::int64_t(1) << (p.n_max * p.m + 1);
    b.grid_ = 1.0 / double(b.ncells_);
    return b;
}

BoundaryFunction BoundaryFunction::flat(double height, double x_lo, double x_hi) {
    if (!(height >= 0.0)) throw std::invalid_argument("flat boundary: height must be >= 0");
    if (!(x_hi > x_lo)) throw std::invalid_argument("flat boundary: empty interval");
    BoundaryFunction b;
    b.kind_ = Kind::Table;
    b.pts_ = {{x_lo, height}, {x_hi, height}};
    b.x_lo_ = x_lo;
    b.x_hi_ = x_hi;
    return b;
}

BoundaryFunction BoundaryFunction::samples(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw std::invalid_argument("sampled boundary: need at least 2 points");
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i].first == pts[i + 1].first)
            throw std::invalid_argument("sampled boundary: duplicate x");
    for (auto& [x, v] : pts)
        if (!(v >= 0.0)) throw std::invalid_argument("sampled boundary: f must be >= 0");
    BoundaryFunction b;
    b.kind_ = Kind::Table;
    b.x_lo_ = pts.front().first;
    b.x_hi_ = pts.back().first;
    b.pts_ = std::move(pts);
    return b;
}

double BoundaryFunction::eval_fractal(double x, int level) const {
    const int top = std::min(level, fp_.n_max);
    double v = 0.0;
    double scale = 1.0;                       // 2^{jm}
    const double layer = std::pow(2.0, -fp_.gamma * fp_.m);
    double amp = 1.0;                         // 2^{-gamma m j}
    for (int j = 0; j <= top; ++j) {
        const double t = x * scale;
        v += amp * tent(t - std::floor(t));
        scale *= double(std::int64_t(1) << fp_.m);
        amp *= layer;
    }
    return v;
}

double BoundaryFunction::eval_table(double x) const {
    auto it = std::upper_bound(pts_.begin(), pts_.end(), std::make_pair(x, 1e300));
    if (it == pts_.begin()) return pts_.front().second;
    if (it == pts_.end()) return pts_.back().second;
    const auto& [x1, v1] = *it;
    const auto& [x0, v0] = *(it - 1);
    if (x == x0) return v0;
    return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
}

double BoundaryFunction::operator()(double x) const {
    if (x < x_lo_ || x > x_hi_)
        throw std::out_of_range("boundary function evaluated outside its interval");
    return kind_ == Kind::Fractal ? eval_fractal(x, fp_.n_max) : eval_table(x);
}

double BoundaryFunction::eval_level(double x, int level) const {
    if (kind_ != Kind::Fractal)
        throw std::logic_error("eval_level is only defined for fractal boundaries");
    if (x < x_lo_ || x > x_hi_)
        throw std::out_of_range("boundary function evaluated outside its interval");
    if (level < 0) return 0.0;
    return eval_fractal(x, level);
}

std::size_t BoundaryFunction::num_breakpoints() const {
    return kind_ == Kind::Fractal ? std::size_t(ncells_ + 1) : pts_.size();
}

double BoundaryFunction::breakpoint_x(std::size_t i) const {
    if (kind_ == Kind::Fractal) return double(i) * grid_;
    return pts_[i].first;
}

double BoundaryFunction::breakpoint_value(std::size_t i) const {
    if (kind_ == Kind::Fractal) return eval_fractal(double(i) * grid_, fp_.n_max);
    return pts_[i].second;
}

double BoundaryFunction::range_max_level(double a, double b, int level) const {
    a = std::max(a, x_lo_);
    b = std::min(b, x_hi_);
    if (!(b >= a)) throw std::invalid_argument("range query outside support");
    if (kind_ == Kind::Table || level < 0) {
        if (level < 0 && kind_ == Kind::Fractal) return 0.0;
        double m = std::max(eval_table(a), eval_table(b));
        auto lo = std::upper_bound(pts_.begin(), pts_.end(), std::make_pair(a, 1e300));
        for (auto it = lo; it != pts_.end() && it->first < b; ++it) m = std::max(m, it->second);
        return m;
    }
    // breakpoints of f_level live on the grid of spacing 2^{-(level*m+1)}
    const int lv = std::min(level, fp_.n_max);
    const double g = 1.0 / double(std::int64_t(1) << (lv * fp_.m + 1));
    double m = std::max(eval_fractal(a, lv), eval_fractal(b, lv));
    std::int64_t i0 = std::int64_t(std::ceil(a / g));
    std::int64_t i1 = std::int64_t(std::floor(b / g));
    for (std::int64_t i = i0; i <= i1; ++i) {
        const double x = double(i) * g;
        if (x > a && x < b) m = std::max(m, eval_fractal(x, lv));
    }
    return m;
}

double BoundaryFunction::range_max(double a, double b) const {
    return range_max_level(a, b, kind_ == Kind::Fractal ? fp_.n_max : 0);
}

double BoundaryFunction::range_min(double a, double b) const {
    a = std::max(a, x_lo_);
    b = std::min(b, x_hi_);
    if (!(b >= a)) throw std::invalid_argument("range query outside support");
    if (kind_ == Kind::Table) {
        double m = std::min(eval_table(a), eval_table(b));
        auto lo = std::upper_bound(pts_.begin(), pts_.end(), std::make_pair(a, 1e300));
        for (auto it = lo; it != pts_.end() && it->first < b; ++it) m = std::min(m, it->second);
        return m;
    }
    double m = std::min(eval_fractal(a, fp_.n_max), eval_fractal(b, fp_.n_max));
    std::int64_t i0 = std::int64_t(std::ceil(a / grid_));
    std::int64_t i1 = std::int64_t(std::floor(b / grid_));
    for (std::int64_t i = i0; i <= i1; ++i) {
        const double x = double(i) * grid_;
        if (x > a && x < b) m = std::min(m, eval_fractal(x, fp_.n_max));
    }
    return m;
}

void BoundaryFunction::for_each_piece(
    double a, double b, const std::function<void(double, double, double, double)>& fn) const {
    a = std::max(a, x_lo_);
    b = std::min(b, x_hi_);
    if (!(b > a)) return;
    if (kind_ == Kind::Fractal) {
        const std::int64_t i0 = std::int64_t(std::floor(a / grid_));
        const std::int64_t i1 = std::min(ncells_ - 1, std::int64_t(std::floor(b / grid_)));
        for (std::int64_t i = i0; i <= i1; ++i) {
            const double x0 = std::max(a, double(i) * grid_);
            const double x1 = std::min(b, double(i + 1) * grid_);
            if (x1 > x0) fn(x0, x1, eval_fractal(x0, fp_.n_max), eval_fractal(x1, fp_.n_max));
        }
        return;
    }
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        const double x0 = std::max(a, pts_[i].first);
        const double x1 = std::min(b, pts_[i + 1].first);
        if (x1 > x0) fn(x0, x1, eval_table(x0), eval_table(x1));
    }
}

double BoundaryFunction::integral() const {
    if (kind_ == Kind::Fractal) {
        // each tent layer integrates to 1/4 independently of the level
        double s = 0.0;
        for (int j = 0; j <= fp_.n_max; ++j) s += std::pow(2.0, -fp_.gamma * fp_.m * j);
        return 0.25 * s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
        s += 0.5 * (pts_[i].second + pts_[i + 1].second) * (pts_[i + 1].first - pts_[i].first);
    return s;
}

double BoundaryFunction::truncation_tail() const {
    if (kind_ != Kind::Fractal) return 0.0;
    const double r = std::pow(2.0, -fp_.gamma * fp_.m);
    return 0.5 * std::pow(r, fp_.n_max + 1) / (1.0 - r);
}

std::int64_t BoundaryFunction::num_cells(int n) const {
    if (kind_ != Kind::Fractal) throw std::logic_error("cells are defined for fractal boundaries only");
    if (n < 0) throw std::invalid_argument("cell level must be >= 0");
    return std::int64_t(1) << (n * fp_.m);
}

double BoundaryFunction::cell_width(int n) const { return 1.0 / double(num_cells(n)); }

double BoundaryFunction::spike_base(int n, std::int64_t k) const {
    const std::int64_t kn = num_cells(n);
    if (k < 0 || k >= kn) throw std::invalid_argument("spike_base: cell index outside K_n");
    if (n == 0) return 0.0;  // sup of f_{-1} == 0
    const double w = cell_width(n);
    // f_{n-1} is linear on the cell (its breakpoints land on cell corners),
    // so the sup sits at an endpoint
    return std::max(eval_fractal(double(k) * w, n - 1), eval_fractal(double(k + 1) * w, n - 1));
}

double BoundaryFunction::base_slope(int n, std::int64_t k) const {
    const std::int64_t kn = num_cells(n);
    if (k < 0 || k >= kn) throw std::invalid_argument("base_slope: cell index outside K_n");
    if (n == 0) return 0.0;
    const double w = cell_width(n);
    return (eval_fractal(double(k + 1) * w, n - 1) - eval_fractal(double(k) * w, n - 1)) / w;
}

}  // namespace holspec
