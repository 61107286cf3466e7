#include "holspec/assemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include <omp.h>

#include "holspec/quadrature.hpp"

namespace holspec {

std::vector<double> DiscreteOperator::shifted_values(double sigma) const {
    std::vector<double> a(kval.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = kval[i] + lambda * pval[i] - sigma * mval[i];
    return a;
}

namespace {

struct Poly3 {  // polynomial of degree <= 3
    double c[4] = {0, 0, 0, 0};
};

Poly3 pmul(const Poly3& a, const Poly3& b) {
    Poly3 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j + i < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Poly3 padd(const Poly3& a, const Poly3& b, double sa = 1.0, double sb = 1.0) {
    Poly3 r;
    for (int i = 0; i < 4; ++i) r.c[i] = sa * a.c[i] + sb * b.c[i];
    return r;
}

Poly3 plin(double c0, double c1) {
    Poly3 r;
    r.c[0] = c0;
    r.c[1] = c1;
    return r;
}

}  // namespace

void tri_power_phiphi(const Point verts[3], const double hv[3], double sigma, double out[3][3]) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = 0.0;

    // coordinates (v, u) = (x, h); the map (x, y) -> (x, h) is area preserving
    const double v[3] = {verts[0].x, verts[1].x, verts[2].x};
    const double u[3] = {std::max(hv[0], 0.0), std::max(hv[1], 0.0), std::max(hv[2], 0.0)};

    const double det = (v[1] - v[0]) * (u[2] - u[0]) - (v[2] - v[0]) * (u[1] - u[0]);
    if (std::abs(det) < 1e-300) return;

    // affine nodal functions phi_i(v,u) = alpha_i + beta_i v + gamma_i u
    double alpha[3], betac[3], gammac[3];
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        alpha[i] = (v[j] * u[k] - v[k] * u[j]) / det;
        betac[i] = (u[j] - u[k]) / det;
        gammac[i] = (v[k] - v[j]) / det;
    }

    int ord[3] = {0, 1, 2};
    std::sort(ord, ord + 3, [&](int a, int b) { return u[a] < u[b]; });
    const int s0 = ord[0], s1 = ord[1], s2 = ord[2];

    auto edge = [&](int p, int q) {  // v as a linear function of u along edge p->q
        const double du = u[q] - u[p];
        const double slope = (v[q] - v[p]) / du;
        return plin(v[p] - slope * u[p], slope);
    };

    auto band = [&](double ua, double ub, const Poly3& vA, const Poly3& vB) {
        if (!(ub - ua > 1e-300)) return;
        // decide left/right at the band midpoint
        const double um = 0.5 * (ua + ub);
        const double va = vA.c[0] + vA.c[1] * um, vb = vB.c[0] + vB.c[1] * um;
        const Poly3& vl = (va <= vb) ? vA : vB;
        const Poly3& vr = (va <= vb) ? vB : vA;
        const Poly3 dv = padd(vr, vl, 1.0, -1.0);
        const Poly3 sq = padd(pmul(vr, vr), pmul(vl, vl), 0.5, -0.5);
        const Poly3 cu = padd(pmul(vr, pmul(vr, vr)), pmul(vl, pmul(vl, vl)), 1.0 / 3, -1.0 / 3);
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                const Poly3 Pi = plin(alpha[i], gammac[i]);
                const Poly3 Pj = plin(alpha[j], gammac[j]);
                Poly3 integ = pmul(pmul(Pi, Pj), dv);
                integ = padd(integ, pmul(padd(pmul(Pi, plin(betac[j], 0.0)),
                                              pmul(Pj, plin(betac[i], 0.0))),
                                         sq));
                integ = padd(integ, pmul(pmul(plin(betac[i] * betac[j], 0.0), cu),
                                         plin(1.0, 0.0)));
                const double val =
                    power_poly_integral(sigma, std::span<const double>(integ.c, 4),
                                        std::max(ua, 0.0), ub);
                out[i][j] += val;
                if (i != j) out[j][i] += val;
            }
        }
    };

    if (u[s1] - u[s0] > 1e-300) band(u[s0], u[s1], edge(s0, s1), edge(s0, s2));
    if (u[s2] - u[s1] > 1e-300) band(u[s1], u[s2], edge(s1, s2), edge(s0, s2));
}

namespace {

void local_geometry(const Mesh& m, std::size_t t, Point p[3], double& area, double grad[3][2]) {
    for (int i = 0; i < 3; ++i) p[i] = m.vertices[std::size_t(m.triangles[t][std::size_t(i)])];
    const double twoA = (p[1].x - p[0].x) * (p[2].y - p[0].y) -
                        (p[2].x - p[0].x) * (p[1].y - p[0].y);
    area = 0.5 * twoA;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        grad[i][0] = (p[j].y - p[k].y) / twoA;
        grad[i][1] = (p[k].x - p[j].x) / twoA;
    }
}

// quadrature with geometric bands toward the h = 0 edge, for non-closed-form
// potentials on singular elements; bands are clipped polygons in barycentric h
void tri_quad_banded(const HolderSubgraphDomain& dom, const PotentialField& V, const Point p[3],
                     const double hv[3], double out[3][3]) {
    const double hmax = std::max({hv[0], hv[1], hv[2]});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = 0.0;
    if (hmax <= 0.0) return;
    const TriRule& rule = triangle_rule(4);
    // clip the triangle to h in [lo, hi]; corners are linear interpolations
    auto integrate_poly = [&](const std::vector<std::array<double, 3>>& poly) {
        // fan-triangulate barycentric polygon and apply the rule
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
            const std::array<double, 3>& b0 = poly[0];
            const std::array<double, 3>& b1 = poly[k];
            const std::array<double, 3>& b2 = poly[k + 1];
            Point q0{b0[0] * p[0].x + b0[1] * p[1].x + b0[2] * p[2].x,
                     b0[0] * p[0].y + b0[1] * p[1].y + b0[2] * p[2].y};
            Point q1{b1[0] * p[0].x + b1[1] * p[1].x + b1[2] * p[2].x,
                     b1[0] * p[0].y + b1[1] * p[1].y + b1[2] * p[2].y};
            Point q2{b2[0] * p[0].x + b2[1] * p[1].x + b2[2] * p[2].x,
                     b2[0] * p[0].y + b2[1] * p[1].y + b2[2] * p[2].y};
            const double area = 0.5 * std::abs((q1.x - q0.x) * (q2.y - q0.y) -
                                               (q2.x - q0.x) * (q1.y - q0.y));
            if (area < 1e-300) continue;
            for (std::size_t r = 0; r < rule.weights.size(); ++r) {
                const auto& w = rule.bary[r];
                std::array<double, 3> bb;  // barycentric wrt the parent triangle
                for (int c = 0; c < 3; ++c)
                    bb[std::size_t(c)] = w[0] * b0[std::size_t(c)] + w[1] * b1[std::size_t(c)] +
                                         w[2] * b2[std::size_t(c)];
                Point q{bb[0] * p[0].x + bb[1] * p[1].x + bb[2] * p[2].x,
                        bb[0] * p[0].y + bb[1] * p[1].y + bb[2] * p[2].y};
                const double val = V.eval(dom, q);
                const double wgt = rule.weights[r] * area;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        out[i][j] += wgt * val * bb[std::size_t(i)] * bb[std::size_t(j)];
            }
        }
    };
    auto clip = [&](double lo, double hi) {
        std::vector<std::array<double, 3>> poly = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        auto hval = [&](const std::array<double, 3>& b) {
            return b[0] * hv[0] + b[1] * hv[1] + b[2] * hv[2];
        };
        auto cut = [&](double level, int keep_sign) {
            std::vector<std::array<double, 3>> next;
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& a = poly[i];
                const auto& b = poly[(i + 1) % n];
                const double fa = (hval(a) - level) * keep_sign;
                const double fb = (hval(b) - level) * keep_sign;
                if (fa >= 0.0) next.push_back(a);
                if ((fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0)) {
                    const double t = fa / (fa - fb);
                    next.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
                                    a[2] + t * (b[2] - a[2])});
                }
            }
            poly = std::move(next);
        };
        cut(lo, +1);
        if (poly.size() >= 3) cut(hi, -1);
        if (poly.size() >= 3) integrate_poly(poly);
    };
    const double hmin = std::min({hv[0], hv[1], hv[2]});
    const bool singular = V.h_singularity().has_value() && hmin < 0.5 * hmax;
    if (!singular) {
        clip(-1e300, 1e300);
        return;
    }
    const int levels = 36;
    double hi = hmax;
    for (int k = 0; k < levels; ++k) {
        const double lo = 0.5 * hi;
        clip(lo, hi == hmax ? 1e300 : hi);
        hi = lo;
    }
    // final sliver dropped: the integrand is integrable and the remaining
    // band carries a 2^{-levels(1+sigma)} fraction of the element integral
}

struct LocalBlocks {
    double K[6], M[6], P[6];  // packed symmetric 3x3: (00,11,22,01,02,12)
};

inline int packed_index(int i, int j) {
    if (i == j) return i;
    const int a = std::min(i, j), b = std::max(i, j);
    if (a == 0 && b == 1) return 3;
    if (a == 0 && b == 2) return 4;
    return 5;
}

LocalBlocks element_matrices(const Mesh& mesh, const HolderSubgraphDomain& dom,
                             const PotentialField& V, std::size_t t) {
    LocalBlocks lb{};
    Point p[3];
    double area, grad[3][2];
    local_geometry(mesh, t, p, area, grad);
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            lb.K[packed_index(i, j)] =
                area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            lb.M[packed_index(i, j)] = area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    }
    switch (V.kind()) {
        case PotentialField::Kind::Zero:
            break;
        case PotentialField::Kind::Constant:
            for (int q = 0; q < 6; ++q) lb.P[q] = V.value() * lb.M[q];
            break;
        case PotentialField::Kind::HPower: {
            // chart triangles only; h is linear on each element
            const double ymax = std::max({p[0].y, p[1].y, p[2].y});
            if (ymax <= 0.0 && dom.has_base_box()) break;
            double hv[3];
            for (int i = 0; i < 3; ++i) hv[i] = dom.f()(p[i].x) - p[i].y;
            const double hmin = std::min({hv[0], hv[1], hv[2]});
            const double hmax = std::max({hv[0], hv[1], hv[2]});
            double S[3][3];
            if (hmin > 0.0 && (hmax - hmin) < 0.5 * hmin) {
                // smooth element: plain quadrature, one midpoint subdivision
                tri_quad_banded(dom, V, p, hv, S);
                for (int i = 0; i < 3; ++i)
                    for (int j = i; j < 3; ++j) lb.P[packed_index(i, j)] = S[i][j];
            } else {
                tri_power_phiphi(p, hv, V.expo(), S);
                for (int i = 0; i < 3; ++i)
                    for (int j = i; j < 3; ++j)
                        lb.P[packed_index(i, j)] = -V.coeff() * S[i][j];
            }
            break;
        }
        default: {
            double hv[3];
            for (int i = 0; i < 3; ++i) {
                const bool chart = dom.in_chart(p[i]);
                hv[i] = chart ? std::max(dom.f()(std::clamp(p[i].x, dom.x_lo(), dom.x_hi())) -
                                             p[i].y,
                                         0.0)
                              : 1.0;
            }
            double S[3][3];
            tri_quad_banded(dom, V, p, hv, S);
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) lb.P[packed_index(i, j)] = S[i][j];
            break;
        }
    }
    return lb;
}

}  // namespace

DiscreteOperator assemble(const Mesh& mesh, const HolderSubgraphDomain& dom,
                          const PotentialField& V, double lambda, BC bc, bool parallel) {
    const std::int64_t nv = mesh.n_vertices();
    const std::size_t nt = mesh.triangles.size();

    // pattern: vertex adjacency including the diagonal
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    pairs.reserve(nt * 9);
    for (const auto& tr : mesh.triangles)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) pairs.emplace_back(tr[std::size_t(i)], tr[std::size_t(j)]);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    DiscreteOperator op;
    op.n = nv;
    op.lambda = lambda;
    op.bc = BC::Neumann;
    op.line_offsets = mesh.line_offsets;
    op.ptr.assign(std::size_t(nv) + 1, 0);
    for (const auto& pr : pairs) op.ptr[std::size_t(pr.first) + 1]++;
    for (std::size_t i = 0; i < std::size_t(nv); ++i) op.ptr[i + 1] += op.ptr[i];
    op.col.resize(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) op.col[k] = pairs[k].second;
    op.kval.assign(pairs.size(), 0.0);
    op.mval.assign(pairs.size(), 0.0);
    op.pval.assign(pairs.size(), 0.0);

    auto csr_index = [&](std::int32_t i, std::int32_t j) {
        const auto b = op.col.begin() + op.ptr[std::size_t(i)];
        const auto e = op.col.begin() + op.ptr[std::size_t(i) + 1];
        return std::size_t(op.ptr[std::size_t(i)] + (std::lower_bound(b, e, j) - b));
    };

    // phase 1: local matrices (parallel); phase 2: serial scatter in element
    // order, so serial and parallel assembly agree bit for bit
    std::vector<LocalBlocks> locals(nt);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t t = 0; t < std::int64_t(nt); ++t)
            locals[std::size_t(t)] = element_matrices(mesh, dom, V, std::size_t(t));
    } else {
        for (std::size_t t = 0; t < nt; ++t) locals[t] = element_matrices(mesh, dom, V, t);
    }
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tr = mesh.triangles[t];
        const LocalBlocks& lb = locals[t];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const std::size_t k = csr_index(tr[std::size_t(i)], tr[std::size_t(j)]);
                const int q = packed_index(i, j);
                op.kval[k] += lb.K[q];
                op.mval[k] += lb.M[q];
                op.pval[k] += lb.P[q];
            }
        }
    }

    if (bc == BC::Dirichlet) {
        // drop boundary rows and columns, keeping the line grouping
        std::vector<std::int32_t> remap(std::size_t(nv), -1);
        DiscreteOperator red;
        red.lambda = lambda;
        red.bc = BC::Dirichlet;
        std::int64_t nn = 0;
        red.line_offsets.push_back(0);
        for (std::size_t li = 0; li + 1 < mesh.line_offsets.size(); ++li) {
            for (std::int32_t v = mesh.line_offsets[li]; v < mesh.line_offsets[li + 1]; ++v)
                if (!mesh.on_boundary[std::size_t(v)]) remap[std::size_t(v)] = std::int32_t(nn++);
            red.line_offsets.push_back(std::int32_t(nn));
        }
        red.n = nn;
        red.ptr.assign(std::size_t(nn) + 1, 0);
        for (std::int64_t i = 0; i < nv; ++i) {
            if (remap[std::size_t(i)] < 0) continue;
            for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k)
                if (remap[std::size_t(op.col[std::size_t(k)])] >= 0)
                    red.ptr[std::size_t(remap[std::size_t(i)]) + 1]++;
        }
        for (std::size_t i = 0; i < std::size_t(nn); ++i) red.ptr[i + 1] += red.ptr[i];
        red.col.resize(std::size_t(red.ptr[std::size_t(nn)]));
        red.kval.resize(red.col.size());
        red.mval.resize(red.col.size());
        red.pval.resize(red.col.size());
        std::vector<std::int64_t> cur(red.ptr.begin(), red.ptr.end() - 1);
        for (std::int64_t i = 0; i < nv; ++i) {
            const std::int32_t ri = remap[std::size_t(i)];
            if (ri < 0) continue;
            for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k) {
                const std::int32_t rj = remap[std::size_t(op.col[std::size_t(k)])];
                if (rj < 0) continue;
                const std::size_t pos = std::size_t(cur[std::size_t(ri)]++);
                red.col[pos] = rj;
                red.kval[pos] = op.kval[std::size_t(k)];
                red.mval[pos] = op.mval[std::size_t(k)];
                red.pval[pos] = op.pval[std::size_t(k)];
            }
        }
        // drop empty line blocks
        std::vector<std::int32_t> lo;
        lo.push_back(0);
        for (std::size_t i = 1; i < red.line_offsets.size(); ++i)
            if (red.line_offsets[i] != lo.back()) lo.push_back(red.line_offsets[i]);
        red.line_offsets = lo;
        return red;
    }
    return op;
}

}  // namespace holspec
