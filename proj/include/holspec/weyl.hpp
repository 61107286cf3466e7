#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holspec/assemble.hpp"
#include "holspec/domain.hpp"
#include "holspec/exponents.hpp"
#include "holspec/norms.hpp"
#include "holspec/potential.hpp"

namespace holspec {

struct WeylScanRow {
    double lambda = 0.0;
    std::int64_t fem_count = 0;
    double semiclassical = 0.0;  // (2pi)^{-d} |B_1| lambda^{d/2} int |V|^{d/2}
    double ratio = 0.0;          // fem_count / lambda^{d/2}
    double mesh_h = 0.0;
};

double unit_ball_volume(int d);

// semiclassical phase-space count; throws std::domain_error when int |V|^{d/2}
// diverges
double semiclassical_count(const PotentialField& V, const HolderSubgraphDomain& dom,
                           double lambda, int d, int quad_res = 1);

// smallest mesh size admitted by the eight-points-per-wavelength rule
double required_mesh_h(double lambda_max, double sup_v);

std::vector<WeylScanRow> weyl_scan(const HolderSubgraphDomain& dom, const PotentialField& V,
                                   std::span<const double> lambda_grid, double mesh_h,
                                   BC bc = BC::Neumann, int quad_res = 1, bool parallel = true);

struct BracketingResult {
    int m_level = 0;
    double lambda = 0.0;
    std::int64_t sum_dirichlet = 0;
    std::int64_t global_count = 0;
    std::int64_t sum_neumann = 0;
    std::int64_t cubes = 0;
    bool sandwich_ok = false;
};

BracketingResult bracketing_check(const HolderSubgraphDomain& dom, const PotentialField& W,
                                  int m_level, double lambda, double mesh_h,
                                  bool parallel = true);

struct ClrRow {
    double lambda = 0.0;
    std::int64_t fem_count = 0;
    double delta0_scaled = 0.0;  // delta0(lambda V)
    double product = 0.0;        // fem_count * delta0^d
};

struct ClrCheck {
    std::vector<ClrRow> rows;
    double norm_v = 0.0;  // combined norm of V
    double fitted_c = 0.0;
    double slope = 0.0;  // trend of ln(product) vs ln(lambda)
    bool divergent_norm = false;
};

ClrCheck clr_bound_check(const HolderSubgraphDomain& dom, const PotentialField& V,
                         const ExponentSet& es, std::span<const double> lambda_grid,
                         double mesh_h, int quad_res = 1, bool parallel = true);

}  // namespace holspec
