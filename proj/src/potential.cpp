#include "holspec/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace holspec {

PotentialField PotentialField::zero() { return PotentialField{}; }

PotentialField PotentialField::constant(double value) {
    if (value > 0.0) throw std::invalid_argument("potential must be <= 0");
    PotentialField v;
    v.kind_ = Kind::Constant;
    v.value_ = value;
    return v;
}

PotentialField PotentialField::h_power(double coeff, double expo) {
    if (coeff < 0.0) throw std::invalid_argument("h_power: coeff must be >= 0 (V = -coeff*h^expo)");
    PotentialField v;
    v.kind_ = Kind::HPower;
    v.coeff_ = coeff;
    v.expo_ = expo;
    return v;
}

PotentialField PotentialField::tent2d(Point center, double halfwidth, double depth) {
    if (!(halfwidth > 0.0) || depth < 0.0)
        throw std::invalid_argument("tent2d: halfwidth must be > 0, depth >= 0");
    PotentialField v;
    v.kind_ = Kind::Tent2D;
    v.center_ = center;
    v.halfwidth_ = halfwidth;
    v.depth_ = depth;
    return v;
}

PotentialField PotentialField::callable(
    std::function<double(const HolderSubgraphDomain&, Point)> fn,
    std::optional<double> h_singularity) {
    PotentialField v;
    v.kind_ = Kind::Callable;
    v.fn_ = std::move(fn);
    v.sing_ = h_singularity;
    return v;
}

double PotentialField::eval(const HolderSubgraphDomain& dom, const Point& p) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return value_;
        case Kind::HPower: {
            if (!dom.in_chart(p)) return 0.0;
            const double h = dom.f()(p.x) - p.y;
            if (h <= 0.0) return 0.0;
            return -coeff_ * std::pow(h, expo_);
        }
        case Kind::Tent2D: {
            auto t = [&](double s) { return std::max(0.0, 1.0 - std::abs(s) / halfwidth_); };
            return -depth_ * t(p.x - center_.x) * t(p.y - center_.y);
        }
        case Kind::Callable:
            return fn_(dom, p);
    }
    return 0.0;
}

std::optional<double> PotentialField::h_singularity() const {
    if (kind_ == Kind::HPower) return expo_;
    if (kind_ == Kind::Callable) return sing_;
    return std::nullopt;
}

std::vector<double> PotentialField::x_cuts() const {
    if (kind_ == Kind::Tent2D)
        return {center_.x - halfwidth_, center_.x, center_.x + halfwidth_};
    return {};
}

std::vector<double> PotentialField::y_cuts() const {
    if (kind_ == Kind::Tent2D)
        return {center_.y - halfwidth_, center_.y, center_.y + halfwidth_};
    return {};
}

}  // namespace holspec
