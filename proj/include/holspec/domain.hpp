#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holspec/boundary.hpp"

namespace holspec {

struct Point {
    double x = 0.0;  // horizontal coordinate x'
    double y = 0.0;  // vertical coordinate x_d
};

struct BaseBox {
    double x_lo = -2.0, x_hi = 2.0;
    double y_lo = -2.0, y_hi = 0.0;
};

// Subgraph domain {x_lo < x' < x_hi, floor_y < x_d < f(x')} with an optional
// base box glued below the chart.  The single chart with identity rotation is
// the only one; every experiment lives on such a domain.
class HolderSubgraphDomain {
public:
    HolderSubgraphDomain(BoundaryFunction f, double gamma, double c, double h_omega,
                         std::optional<BaseBox> base = std::nullopt, double floor_y = 0.0);

    const BoundaryFunction& f() const { return f_; }
    double gamma() const { return gamma_; }
    double c() const { return c_; }
    double h_omega() const { return h_omega_; }
    double floor_y() const { return floor_y_; }
    bool has_base_box() const { return base_.has_value(); }
    const BaseBox& base_box() const { return *base_; }

    double x_lo() const { return f_.x_lo(); }
    double x_hi() const { return f_.x_hi(); }

    bool inside(const Point& p) const;

    // boundary height f(x') - x_d; the point must lie in the chart
    // (floor_y <= x_d); points of the base box miss the chart
    double h_at(const Point& p) const;
    bool in_chart(const Point& p) const;

    // exact Euclidean distance to the boundary polygon
    double dist_to_boundary(const Point& p) const;

    double area() const;

    // empirical Hoelder ratio max |f(x)-f(y)| / |x-y|^gamma over random pairs
    double holder_check(std::size_t num_pairs, std::uint64_t rng_seed) const;

    // tail bound of the fractal truncation (0 for exact polygons)
    double truncation_tail() const { return f_.truncation_tail(); }

    // chart-layer membership per the layer definitions: x' at distance
    // > h_omega from the chart edges and x_d > h_omega (below the graph)
    bool in_chart_layer(const Point& p) const;

    std::string breakpoints_csv() const;

private:
    BoundaryFunction f_;
    double gamma_;
    double c_;
    double h_omega_;
    std::optional<BaseBox> base_;
    double floor_y_;

    struct Segment {
        Point a, b;
    };
    std::vector<Segment> walls_;  // non-graph boundary pieces
    void build_walls();
};

// builders matching the domain specs
HolderSubgraphDomain build_fractal_domain(const FractalParams& p, bool base_box = true,
                                          std::optional<double> h_omega = std::nullopt);
HolderSubgraphDomain build_flat_domain(double height, double width = 1.0,
                                       std::optional<double> h_omega = std::nullopt);
HolderSubgraphDomain build_sampled_domain(std::vector<std::pair<double, double>> pts,
                                          double gamma, double c,
                                          std::optional<double> h_omega = std::nullopt);

}  // namespace holspec
