#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holspec/domain.hpp"
#include "holspec/exponents.hpp"
#include "holspec/potential.hpp"

namespace holspec {

// open axis-aligned rectangle; y_hi may be +infinity to mean "up to the graph"
struct Rect {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
};

Rect chart_rect(const HolderSubgraphDomain& dom);

struct QuadOptions {
    int x_order = 4;    // Gauss order across each boundary column
    int h_levels = 40;  // geometric cells of ratio 2 toward the graph
    int h_order = 4;    // Gauss order per graded cell
};

// resolution >= 1 deepens the grading; doubling it must move converged norms
// by well under 0.5%
QuadOptions quad_for_resolution(int resolution);

struct NormValue {
    double value = 0.0;
    bool divergent = false;
    std::string note;
};

struct YoungFunction {
    std::string name;
    std::function<double(double)> B;
};
const YoungFunction& default_young();  // (1+u)ln(1+u) - u

// exact integral of h^e over {rect ∩ subgraph chart, h >= eta};
// throws std::domain_error when the integral diverges (eta = 0, e <= -1 with
// the graph inside the rectangle)
double power_region_integral(const HolderSubgraphDomain& dom, const Rect& rect, double e,
                             double eta);

// quadrature integral of F(p, h) over the same region, graded toward small h;
// extra cuts split columns (x) and vertical intervals (y) at integrand kinks
double numeric_region_integral(const HolderSubgraphDomain& dom, const Rect& rect,
                               const std::function<double(const Point&, double)>& F, double eta,
                               const QuadOptions& q, std::span<const double> extra_x_cuts = {},
                               std::span<const double> extra_y_cuts = {});

// area of rect ∩ Omega (chart part exactly; base box part by box clipping)
double region_area(const HolderSubgraphDomain& dom, const Rect& rect);

NormValue lp_norm(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                  int resolution = 1);
// |V|_{p,beta} restricted to {h >= eta}; eta = 0 is the full seminorm
NormValue weighted_seminorm(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                            double beta, double eta = 0.0, int resolution = 1);
NormValue orlicz_norm(const PotentialField& V, const HolderSubgraphDomain& dom,
                      const YoungFunction& young = default_young(), int resolution = 1);

// region-restricted variants (rect intersected with Omega)
NormValue lp_norm_region(const PotentialField& V, const HolderSubgraphDomain& dom,
                         const Rect& rect, double p, int resolution = 1);
// modular integral of the Luxemburg construction over a region
double orlicz_modular_region(const PotentialField& V, const HolderSubgraphDomain& dom,
                             const Rect& rect, double t, const YoungFunction& young,
                             int resolution = 1);

struct CombinedNorm {
    double value = 0.0;
    double bulk = 0.0;      // Orlicz part for d = 2, L^{d/2} for d >= 3
    double seminorm = 0.0;  // weighted boundary seminorm
    bool divergent = false;
    std::string note;
};
CombinedNorm combined_norm(const PotentialField& V, const HolderSubgraphDomain& dom,
                           const ExponentSet& es, int resolution = 1, double eta = 0.0);

struct NormComparison {
    double lhs = 0.0;  // combined norm
    double rhs = 0.0;  // plain L^p norm
    double threshold_p = 0.0;
    bool divergent = false;
};
NormComparison norm_comparison(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                               const ExponentSet& es, int resolution = 1);

struct DivergenceSlope {
    double loglog_slope = 0.0;    // d ln F / d ln(1/eta) over the grid
    double eta_derivative = 0.0;  // dF / d ln(1/eta) at the finest pair
    bool divergent = false;
    bool degenerate = false;
    std::vector<double> eta;
    std::vector<double> values;  // truncated seminorm^p
};
DivergenceSlope divergence_slope(const PotentialField& V, const HolderSubgraphDomain& dom,
                                 double p, double beta, std::vector<double> eta_grid,
                                 int resolution = 1);

}  // namespace holspec
