#include "holspec/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "holspec/rng.hpp"

namespace holspec {

namespace {

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    const double qx = a.x + t * dx, qy = a.y + t * dy;
    return std::hypot(p.x - qx, p.y - qy);
}

}  // namespace

HolderSubgraphDomain::HolderSubgraphDomain(BoundaryFunction f, double gamma, double c,
                                           double h_omega, std::optional<BaseBox> base,
                                           double floor_y)
    : f_(std::move(f)), gamma_(gamma), c_(c), h_omega_(h_omega), base_(base), floor_y_(floor_y) {
    if (!(gamma_ > 0.0) || gamma_ > 1.0)
        throw std::invalid_argument("domain: gamma must be in (0,1]");
    if (!(c_ >= 0.0)) throw std::invalid_argument("domain: c must be >= 0");
    if (!(h_omega_ > 0.0)) throw std::invalid_argument("domain: h_omega must be > 0");
    if (base_ && floor_y_ != 0.0)
        throw std::invalid_argument("domain: base box requires the chart floor at 0");
    build_walls();
}

void HolderSubgraphDomain::build_walls() {
    const double xl = f_.x_lo(), xh = f_.x_hi();
    const double fl = f_(xl), fh = f_(xh);
    if (!base_) {
        walls_.push_back({{xl, floor_y_}, {xh, floor_y_}});
        if (fl > floor_y_) walls_.push_back({{xl, floor_y_}, {xl, fl}});
        if (fh > floor_y_) walls_.push_back({{xh, floor_y_}, {xh, fh}});
        return;
    }
    const BaseBox& b = *base_;
    walls_.push_back({{b.x_lo, b.y_lo}, {b.x_hi, b.y_lo}});
    walls_.push_back({{b.x_lo, b.y_lo}, {b.x_lo, b.y_hi}});
    walls_.push_back({{b.x_hi, b.y_lo}, {b.x_hi, b.y_hi}});
    if (xl > b.x_lo) walls_.push_back({{b.x_lo, 0.0}, {xl, 0.0}});
    if (xh < b.x_hi) walls_.push_back({{xh, 0.0}, {b.x_hi, 0.0}});
    if (fl > 0.0) walls_.push_back({{xl, 0.0}, {xl, fl}});
    if (fh > 0.0) walls_.push_back({{xh, 0.0}, {xh, fh}});
}

bool HolderSubgraphDomain::inside(const Point& p) const {
    if (p.x > f_.x_lo() && p.x < f_.x_hi() && p.y >= floor_y_ && p.y < f_(p.x)) {
        if (p.y > floor_y_) return true;
        // on the chart floor: open iff the base box continues below
        return base_.has_value();
    }
    if (base_) {
        const BaseBox& b = *base_;
        if (p.x > b.x_lo && p.x < b.x_hi && p.y > b.y_lo && p.y < b.y_hi) return true;
    }
    return false;
}

bool HolderSubgraphDomain::in_chart(const Point& p) const {
    return p.x >= f_.x_lo() && p.x <= f_.x_hi() && p.y >= floor_y_;
}

double HolderSubgraphDomain::h_at(const Point& p) const {
    if (!in_chart(p))
        throw std::domain_error("h_at: point misses the subgraph chart");
    const double h = f_(p.x) - p.y;
    if (h <= 0.0) throw std::domain_error("h_at: point is not below the graph");
    return h;
}

double HolderSubgraphDomain::dist_to_boundary(const Point& p) const {
    double best = 1e300;
    for (const auto& w : walls_) best = std::min(best, point_segment_dist(p, w.a, w.b));
    // graph polyline: only breakpoints within |x - p.x| <= best matter
    const std::size_t nb = f_.num_breakpoints();
    // locate p.x in the breakpoint grid by bisection on breakpoint_x
    std::size_t lo = 0, hi = nb - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (f_.breakpoint_x(mid) <= p.x) lo = mid; else hi = mid;
    }
    auto seg_dist = [&](std::size_t i) {
        Point a{f_.breakpoint_x(i), f_.breakpoint_value(i)};
        Point b{f_.breakpoint_x(i + 1), f_.breakpoint_value(i + 1)};
        return point_segment_dist(p, a, b);
    };
    // sweep outward from the column containing p.x and stop once horizontal
    // distance alone exceeds the best distance found
    best = std::min(best, seg_dist(lo));
    for (std::size_t step = 1;; ++step) {
        bool progress = false;
        if (lo >= step) {
            const std::size_t i = lo - step;
            if (f_.breakpoint_x(i + 1) >= p.x - best) {
                best = std::min(best, seg_dist(i));
                progress = true;
            }
        }
        if (lo + step + 1 < nb) {
            const std::size_t i = lo + step;
            if (f_.breakpoint_x(i) <= p.x + best) {
                best = std::min(best, seg_dist(i));
                progress = true;
            }
        }
        if (!progress) break;
    }
    return best;
}

double HolderSubgraphDomain::area() const {
    double a = f_.integral() - floor_y_ * (f_.x_hi() - f_.x_lo());
    if (base_)
        a += (base_->x_hi - base_->x_lo) * (base_->y_hi - base_->y_lo);
    return a;
}

double HolderSubgraphDomain::holder_check(std::size_t num_pairs, std::uint64_t rng_seed) const {
    if (num_pairs == 0) throw std::invalid_argument("holder_check: need at least one pair");
    auto gen = rng_stream(rng_seed, "domain.holder_check");
    std::uniform_real_distribution<double> ux(f_.x_lo(), f_.x_hi());
    double worst = 0.0;
    for (std::size_t i = 0; i < num_pairs; ++i) {
        const double x = ux(gen), y = ux(gen);
        if (x == y) continue;
        const double ratio = std::abs(f_(x) - f_(y)) / std::pow(std::abs(x - y), gamma_);
        worst = std::max(worst, ratio);
    }
    return worst;
}

bool HolderSubgraphDomain::in_chart_layer(const Point& p) const {
    if (p.x <= f_.x_lo() + h_omega_ || p.x >= f_.x_hi() - h_omega_) return false;
    if (p.y <= h_omega_) return false;
    return p.y < f_(p.x);
}

std::string HolderSubgraphDomain::breakpoints_csv() const {
    std::string out = "x,f\n";
    char buf[64];
    for (std::size_t i = 0; i < f_.num_breakpoints(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f_.breakpoint_x(i), f_.breakpoint_value(i));
        out += buf;
    }
    return out;
}

HolderSubgraphDomain build_fractal_domain(const FractalParams& p, bool base_box,
                                          std::optional<double> h_omega) {
    BoundaryFunction f = BoundaryFunction::fractal(p);
    double h = 0.0;
    if (h_omega) {
        h = *h_omega;
    } else {
        // quarter of the minimum of f over the middle sub-window, where the
        // first tent keeps f away from zero
        h = 0.25 * f.range_min(0.25, 0.75);
    }
    std::optional<BaseBox> base;
    if (base_box) base = BaseBox{};
    // the fractal f carries Hoelder constant 3 (checked empirically in tests)
    return HolderSubgraphDomain(std::move(f), p.gamma, 3.0, h, base, 0.0);
}

HolderSubgraphDomain build_flat_domain(double height, double width,
                                       std::optional<double> h_omega) {
    BoundaryFunction f = BoundaryFunction::flat(height, 0.0, width);
    const double h = h_omega.value_or(std::min(0.25, height / 4.0));
    return HolderSubgraphDomain(std::move(f), 1.0, 1e-12, h, std::nullopt, 0.0);
}

HolderSubgraphDomain build_sampled_domain(std::vector<std::pair<double, double>> pts,
                                          double gamma, double c,
                                          std::optional<double> h_omega) {
    BoundaryFunction f = BoundaryFunction::samples(std::move(pts));
    double h = h_omega.value_or(0.25 * std::max(1e-6, f.range_min(f.x_lo(), f.x_hi())));
    if (h <= 0.0) h = 1e-3;
    return HolderSubgraphDomain(std::move(f), gamma, c, h, std::nullopt, 0.0);
}

}  // namespace holspec
