#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holspec/domain.hpp"

namespace holspec {

// Nonpositive potential on a subgraph domain.  Closed-form kinds carry enough
// structure for exact integration; Callable falls back to quadrature.
class PotentialField {
public:
    enum class Kind { Zero, Constant, HPower, Tent2D, Callable };

    static PotentialField zero();
    static PotentialField constant(double value);  // value <= 0
    // V = -coeff * h^expo on the chart (h = f(x') - x_d), 0 on the base box
    static PotentialField h_power(double coeff, double expo);
    // product tent -depth * t((x-cx)/hw) * t((y-cy)/hw), supported on the
    // centered square of half-width hw
    static PotentialField tent2d(Point center, double halfwidth, double depth);
    static PotentialField callable(std::function<double(const HolderSubgraphDomain&, Point)> fn,
                                   std::optional<double> h_singularity = std::nullopt);

    Kind kind() const { return kind_; }
    double value() const { return value_; }
    double coeff() const { return coeff_; }
    double expo() const { return expo_; }
    Point tent_center() const { return center_; }
    double tent_halfwidth() const { return halfwidth_; }
    double tent_depth() const { return depth_; }

    double eval(const HolderSubgraphDomain& dom, const Point& p) const;

    // exponent of h in V near the graph, when known (HPower) — drives the
    // analytic divergence tests and quadrature grading
    std::optional<double> h_singularity() const;

    bool chart_only() const { return kind_ == Kind::HPower; }
    bool is_zero() const { return kind_ == Kind::Zero; }

    // positions where the integrand may kink (tent edges); quadrature splits
    // columns and vertical intervals there
    std::vector<double> x_cuts() const;
    std::vector<double> y_cuts() const;

private:
    Kind kind_ = Kind::Zero;
    double value_ = 0.0;
    double coeff_ = 0.0;
    double expo_ = 0.0;
    Point center_{};
    double halfwidth_ = 0.0;
    double depth_ = 0.0;
    std::function<double(const HolderSubgraphDomain&, Point)> fn_;
    std::optional<double> sing_;
};

}  // namespace holspec
