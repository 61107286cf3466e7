#include "holspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holspec/quadrature.hpp"
#include "holspec/rng.hpp"
#include "holspec/util.hpp"

namespace holspec {

CountResult count_below(const DiscreteOperator& op, double sigma, bool parallel) {
    CountResult res;
    res.sigma_used = sigma;
    for (int attempt = 0; attempt < 8; ++attempt) {
        res.inertia = operator_inertia(op, res.sigma_used, parallel);
        res.count = res.inertia.n_minus;
        if (res.inertia.n_zero == 0 && !res.inertia.degenerate) return res;
        // sigma sits on (or numerically at) an eigenvalue; nudge it downward,
        // keeping the count at sigma^-
        res.perturbed = true;
        res.sigma_used -= 1e-10 * (1.0 + std::abs(res.sigma_used)) * double(attempt + 1);
    }
    return res;
}

std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, int k, double tol,
                                       bool parallel) {
    if (k < 1) throw std::invalid_argument("lowest_eigenvalues: k must be >= 1");
    auto count = [&](double s) { return count_below(op, s, parallel).count; };
    double lo = -1.0;
    while (count(lo) > 0) lo *= 4.0;
    double hi = 1.0;
    while (count(hi) < k) hi *= 4.0;
    std::vector<double> eigs;
    for (int j = 1; j <= k; ++j) {
        // relative bisection width tol
        double a = lo, b = hi;
        while (b - a > tol * std::max(1.0, std::min(std::abs(a), std::abs(b)))) {
            const double m = 0.5 * (a + b);
            if (count(m) >= j)
                b = m;
            else
                a = m;
        }
        eigs.push_back(0.5 * (a + b));
    }
    return eigs;
}

PoincareScan poincare_scan(HatKind kind, std::span<const double> delta_grid, int elems_across,
                           bool parallel) {
    PoincareScan out;
    if (delta_grid.size() < 3) {
        out.degenerate = true;
        return out;
    }
    for (double delta : delta_grid) {
        HolderSubgraphDomain dom = [&] {
            if (kind == HatKind::Square) {
                BoundaryFunction f = BoundaryFunction::flat(delta, 0.0, delta);
                return HolderSubgraphDomain(std::move(f), 1.0, 1e-12, delta / 4.0, std::nullopt,
                                            0.0);
            }
            // hat domain: floor -delta/4, tent spike from delta/4 up to 3*delta/4
            const double a_hat = 0.5 * delta;
            std::vector<std::pair<double, double>> pts = {{-a_hat / 2, delta / 4},
                                                          {0.0, 3 * delta / 4},
                                                          {a_hat / 2, delta / 4}};
            BoundaryFunction f = BoundaryFunction::samples(std::move(pts));
            return HolderSubgraphDomain(std::move(f), 1.0, 1.0, delta / 16.0, std::nullopt,
                                        -delta / 4.0);
        }();
        MeshOptions mo;
        mo.target_h = delta / elems_across;
        Mesh mesh = triangulate(dom, mo);
        DiscreteOperator op = assemble(mesh, dom, PotentialField::zero(), 0.0, BC::Neumann,
                                       parallel);
        std::vector<double> eig = lowest_eigenvalues(op, 2, 1e-7, parallel);
        out.delta.push_back(delta);
        out.mu2.push_back(eig[1]);
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < out.delta.size(); ++i) {
        lx.push_back(std::log(out.delta[i]));
        ly.push_back(std::log(out.mu2[i]));
    }
    LineFit fit = theil_sen(lx, ly);
    out.degenerate = fit.degenerate;
    out.slope = fit.slope;
    out.c_p = 1e300;
    for (std::size_t i = 0; i < out.delta.size(); ++i)
        out.c_p = std::min(out.c_p, out.mu2[i] * out.delta[i] * out.delta[i]);
    return out;
}

namespace {

struct QFunctional {
    const Mesh& mesh;
    double qstar;

    // S = integral |u|^{qstar}, g_i = qstar * integral |u|^{qstar-1} sgn(u) phi_i
    double value_and_grad(std::span<const double> u, std::vector<double>* grad) const {
        const TriRule& rule = triangle_rule(4);
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double S = 0.0;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tr = mesh.triangles[t];
            const double area = mesh.triangle_area(t);
            // one midpoint subdivision for the high power of the linear u
            const double uv[3] = {u[std::size_t(tr[0])], u[std::size_t(tr[1])],
                                  u[std::size_t(tr[2])]};
            const double um[3] = {0.5 * (uv[1] + uv[2]), 0.5 * (uv[0] + uv[2]),
                                  0.5 * (uv[0] + uv[1])};
            // children in barycentric coords of the parent
            static const double child[4][3][3] = {
                {{1, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}},
                {{0.5, 0.5, 0}, {0, 1, 0}, {0, 0.5, 0.5}},
                {{0.5, 0, 0.5}, {0, 0.5, 0.5}, {0, 0, 1}},
                {{0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}}};
            (void)um;
            for (const auto& ch : child) {
                for (std::size_t r = 0; r < rule.weights.size(); ++r) {
                    double bary_parent[3] = {0, 0, 0};
                    for (int c = 0; c < 3; ++c)
                        for (int v = 0; v < 3; ++v)
                            bary_parent[v] += rule.bary[r][std::size_t(c)] * ch[c][v];
                    const double uval = bary_parent[0] * uv[0] + bary_parent[1] * uv[1] +
                                        bary_parent[2] * uv[2];
                    const double w = rule.weights[r] * area * 0.25;
                    S += w * std::pow(std::abs(uval), qstar);
                    if (grad) {
                        const double dpow =
                            qstar * std::pow(std::abs(uval), qstar - 1.0) *
                            (uval >= 0.0 ? 1.0 : -1.0);
                        for (int v = 0; v < 3; ++v)
                            (*grad)[std::size_t(tr[std::size_t(v)])] += w * dpow * bary_parent[v];
                    }
                }
            }
        }
        return S;
    }
};

void csr_matvec(const DiscreteOperator& op, std::span<const double> vals,
                std::span<const double> x, std::span<double> y) {
    for (std::int64_t i = 0; i < op.n; ++i) {
        double acc = 0.0;
        for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k)
            acc += vals[std::size_t(k)] * x[std::size_t(op.col[std::size_t(k)])];
        y[std::size_t(i)] = acc;
    }
}

}  // namespace

PSEstimate estimate_ps_constant(const HolderSubgraphDomain& dom, double qstar, double target_h,
                                int max_iter, std::uint64_t seed, bool parallel) {
    if (!(qstar >= 2.0)) throw std::invalid_argument("estimate_ps_constant: qstar must be >= 2");
    Mesh mesh = triangulate(dom, target_h);
    DiscreteOperator op = assemble(mesh, dom, PotentialField::zero(), 0.0, BC::Neumann, parallel);
    const std::size_t n = std::size_t(op.n);
    QFunctional qf{mesh, qstar};

    // mass-weighted mean constraint m^T u = 0
    std::vector<double> ones(n, 1.0), mvec(n);
    csr_matvec(op, op.mval, ones, mvec);
    double msum = 0.0;
    for (double v : mvec) msum += v;

    auto project = [&](std::vector<double>& u) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += mvec[i] * u[i];
        const double shift = mu / msum;
        for (std::size_t i = 0; i < n; ++i) u[i] -= shift;
    };
    std::vector<double> ku(n);
    auto rayleigh = [&](const std::vector<double>& u, double* energy, double* S) {
        csr_matvec(op, op.kval, u, ku);
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e += u[i] * ku[i];
        const double s = qf.value_and_grad(u, nullptr);
        if (energy) *energy = e;
        if (S) *S = s;
        return e / std::pow(s, 2.0 / qstar);
    };

    // starts: the long-direction cosine mode plus seeded random fields
    std::vector<std::vector<double>> starts;
    {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const Point& p : mesh.vertices) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        const bool tall = (ymax - ymin) >= (xmax - xmin);
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point& p = mesh.vertices[i];
            u[i] = tall ? std::cos(std::numbers::pi * (p.y - ymin) / (ymax - ymin))
                        : std::cos(std::numbers::pi * (p.x - xmin) / (xmax - xmin));
        }
        starts.push_back(std::move(u));
    }
    auto gen = rng_stream(seed, "spectral.ps_descent");
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (int s = 0; s < 5; ++s) {
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = ur(gen);
        starts.push_back(std::move(u));
    }

    PSEstimate best;
    best.min_value = 1e300;
    for (auto& u : starts) {
        project(u);
        double nrm = 0.0;
        for (double v : u) nrm += v * v;
        if (nrm == 0.0) continue;
        for (double& v : u) v /= std::sqrt(nrm);

        double E, S;
        double R = rayleigh(u, &E, &S);
        double step = 0.1;
        int it = 0;
        int stall = 0;
        std::vector<double> grad(n), trial(n), sgrad(n);
        for (; it < max_iter && stall < 25; ++it) {
            qf.value_and_grad(u, &sgrad);
            csr_matvec(op, op.kval, u, ku);
            const double N = std::pow(S, 2.0 / qstar);
            const double dN_scale = (2.0 / qstar) * std::pow(S, 2.0 / qstar - 1.0);
            for (std::size_t i = 0; i < n; ++i)
                grad[i] = (2.0 * ku[i] * N - E * dN_scale * sgrad[i]) / (N * N);
            project(grad);
            double gn = 0.0;
            for (double g : grad) gn += g * g;
            if (gn < 1e-26) break;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - step * grad[i];
                project(trial);
                double tn = 0.0;
                for (double v : trial) tn += v * v;
                for (double& v : trial) v /= std::sqrt(tn);
                double Et, St;
                const double Rt = rayleigh(trial, &Et, &St);
                if (Rt < R) {
                    const double drop = (R - Rt) / std::max(R, 1e-300);
                    u.swap(trial);
                    R = Rt;
                    E = Et;
                    S = St;
                    step *= 1.25;
                    accepted = true;
                    stall = (drop < 1e-10) ? stall + 1 : 0;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) ++stall;
        }
        if (R < best.min_value) {
            best.min_value = R;
            best.iterations = it;
            best.converged = (it < max_iter);
        }
    }
    return best;
}

PSScan ps_scaling_scan(double delta, std::span<const double> m_grid, double qstar,
                       double target_h, int max_iter, std::uint64_t seed, bool parallel) {
    PSScan out;
    for (double M : m_grid) {
        BoundaryFunction f = BoundaryFunction::flat(delta, 0.0, delta / M);
        HolderSubgraphDomain dom(std::move(f), 1.0, 1e-12, delta / 8.0, std::nullopt, 0.0);
        PSEstimate est = estimate_ps_constant(dom, qstar, target_h, max_iter, seed, parallel);
        out.m_values.push_back(M);
        out.min_values.push_back(est.min_value);
    }
    if (out.m_values.size() < 2) {
        out.degenerate = true;
        return out;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < out.m_values.size(); ++i) {
        lx.push_back(std::log(out.m_values[i]));
        ly.push_back(std::log(out.min_values[i]));
    }
    LineFit fit = theil_sen(lx, ly);
    out.slope = fit.slope;
    out.degenerate = fit.degenerate;
    return out;
}

}  // namespace holspec
