#include "holspec/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holspec/spectral.hpp"
#include "holspec/util.hpp"

namespace holspec {

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double semiclassical_count(const PotentialField& V, const HolderSubgraphDomain& dom,
                           double lambda, int d, int quad_res) {
    if (lambda == 0.0) return 0.0;
    NormValue nv = lp_norm(V, dom, 0.5 * d < 1.0 ? 1.0 : 0.5 * d, quad_res);
    if (nv.divergent) throw std::domain_error("semiclassical_count: int |V|^{d/2} diverges");
    const double integral = std::pow(nv.value, 0.5 * d);
    return std::pow(2.0 * std::numbers::pi, -double(d)) * unit_ball_volume(d) *
           std::pow(lambda, 0.5 * d) * integral;
}

namespace {

double sup_v_estimate(const PotentialField& V, const HolderSubgraphDomain& dom, double mesh_h) {
    switch (V.kind()) {
        case PotentialField::Kind::Zero: return 0.0;
        case PotentialField::Kind::Constant: return std::abs(V.value());
        case PotentialField::Kind::Tent2D: return V.tent_depth();
        case PotentialField::Kind::HPower:
            // unbounded near the graph; gauge by the finest resolved height
            return V.coeff() * std::pow(mesh_h, V.expo());
        default: {
            double m = 0.0;
            for (double x = dom.x_lo() + mesh_h; x < dom.x_hi(); x += mesh_h) {
                const double f = dom.f()(x);
                for (double y = dom.floor_y() + 0.5 * mesh_h; y < f; y += mesh_h)
                    m = std::max(m, std::abs(V.eval(dom, Point{x, y})));
            }
            return m;
        }
    }
}

}  // namespace

double required_mesh_h(double lambda_max, double sup_v) {
    if (lambda_max * sup_v <= 0.0) return 1e300;
    return 2.0 * std::numbers::pi / std::sqrt(lambda_max * sup_v) / 8.0;
}

std::vector<WeylScanRow> weyl_scan(const HolderSubgraphDomain& dom, const PotentialField& V,
                                   std::span<const double> lambda_grid, double mesh_h, BC bc,
                                   int quad_res, bool parallel) {
    if (lambda_grid.empty()) return {};
    for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] < lambda_grid[i + 1]))
            throw std::invalid_argument("weyl_scan: lambda grid must increase");
    const double lam_max = lambda_grid.back();
    const double need = required_mesh_h(lam_max, sup_v_estimate(V, dom, mesh_h));
    if (mesh_h > need)
        throw std::invalid_argument("weyl_scan: mesh_h violates the wavelength rule; need h <= " +
                                    std::to_string(need));

    Mesh mesh = triangulate(dom, mesh_h);
    DiscreteOperator op = assemble(mesh, dom, V, 1.0, bc, parallel);
    std::vector<WeylScanRow> rows;
    for (double lam : lambda_grid) {
        op.lambda = lam;
        CountResult cr = count_below(op, 0.0, parallel);
        WeylScanRow row;
        row.lambda = lam;
        row.fem_count = cr.count;
        row.semiclassical = semiclassical_count(V, dom, lam, 2, quad_res);
        row.ratio = double(cr.count) / lam;  // d = 2: lambda^{d/2} = lambda
        row.mesh_h = mesh_h;
        rows.push_back(row);
    }
    return rows;
}

BracketingResult bracketing_check(const HolderSubgraphDomain& dom, const PotentialField& W,
                                  int m_level, double lambda, double mesh_h, bool parallel) {
    BracketingResult out;
    out.m_level = m_level;
    out.lambda = lambda;
    const double side = std::exp2(-double(m_level));
    // the mesh must be aligned with the cube grid
    const double ratio = side / mesh_h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("bracketing_check: mesh_h must divide the cube side");

    // support box of the tent potential
    if (W.kind() != PotentialField::Kind::Tent2D)
        throw std::invalid_argument("bracketing_check: expects the compact tent potential");
    const Point c = W.tent_center();
    const double hw = W.tent_halfwidth();
    const double sx0 = c.x - hw, sx1 = c.x + hw, sy0 = c.y - hw, sy1 = c.y + hw;

    Mesh mesh = triangulate(dom, mesh_h);
    DiscreteOperator op = assemble(mesh, dom, W, lambda, BC::Neumann, parallel);
    out.global_count = count_below(op, 0.0, parallel).count;

    const long jx0 = long(std::floor(sx0 / side)), jx1 = long(std::ceil(sx1 / side));
    const long jy0 = long(std::floor(sy0 / side)), jy1 = long(std::ceil(sy1 / side));
    for (long jx = jx0; jx < jx1; ++jx) {
        for (long jy = jy0; jy < jy1; ++jy) {
            const double x0 = double(jx) * side, x1 = x0 + side;
            const double y0 = double(jy) * side, y1 = y0 + side;
            // open cube must meet the support
            if (!(x1 > sx0 && x0 < sx1 && y1 > sy0 && y0 < sy1)) continue;
            // the closed cube must stay inside Omega (support-distance rule)
            const bool inside = x0 > dom.x_lo() && x1 < dom.x_hi() && y0 > dom.floor_y() &&
                                dom.f().range_min(x0, x1) > y1;
            if (!inside)
                throw std::invalid_argument(
                    "bracketing_check: a support cube leaves the domain; supp W too close to "
                    "the boundary for this m_level");
            Mesh cube = submesh(mesh, SubmeshBox{x0, x1, y0, y1});
            DiscreteOperator cn = assemble(cube, dom, W, lambda, BC::Neumann, parallel);
            DiscreteOperator cd = assemble(cube, dom, W, lambda, BC::Dirichlet, parallel);
            out.sum_neumann += count_below(cn, 0.0, parallel).count;
            out.sum_dirichlet += count_below(cd, 0.0, parallel).count;
            out.cubes++;
        }
    }
    out.sandwich_ok =
        out.sum_dirichlet <= out.global_count && out.global_count <= out.sum_neumann;
    return out;
}

ClrCheck clr_bound_check(const HolderSubgraphDomain& dom, const PotentialField& V,
                         const ExponentSet& es, std::span<const double> lambda_grid,
                         double mesh_h, int quad_res, bool parallel) {
    ClrCheck out;
    CombinedNorm cn = combined_norm(V, dom, es, quad_res);
    out.norm_v = cn.value;
    if (cn.divergent) {
        out.divergent_norm = true;
        return out;
    }
    const double lam_max = lambda_grid.empty() ? 0.0 : lambda_grid.back();
    const double need = required_mesh_h(lam_max, sup_v_estimate(V, dom, mesh_h));
    if (mesh_h > need)
        throw std::invalid_argument("clr_bound_check: mesh_h violates the wavelength rule");

    Mesh mesh = triangulate(dom, mesh_h);
    DiscreteOperator op = assemble(mesh, dom, V, 1.0, BC::Neumann, parallel);
    for (double lam : lambda_grid) {
        op.lambda = lam;
        ClrRow row;
        row.lambda = lam;
        row.fem_count = count_below(op, 0.0, parallel).count;
        row.delta0_scaled = delta0(lam * cn.value, dom.h_omega(), es.d);
        row.product = double(row.fem_count) * std::pow(row.delta0_scaled, es.d);
        out.rows.push_back(row);
        out.fitted_c = std::max(out.fitted_c, row.product);
    }
    std::vector<double> lx, ly;
    for (const ClrRow& r : out.rows)
        if (r.fem_count > 0) {
            lx.push_back(std::log(r.lambda));
            ly.push_back(std::log(r.product));
        }
    if (lx.size() >= 2) out.slope = theil_sen(lx, ly).slope;
    return out;
}

}  // namespace holspec
