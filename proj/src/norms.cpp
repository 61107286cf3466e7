#include "holspec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "holspec/quadrature.hpp"
#include "holspec/util.hpp"

namespace holspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Piece {
    double x0, x1, f0, f1;
};

std::vector<Piece> collect_pieces(const HolderSubgraphDomain& dom, const Rect& rect,
                                  std::span<const double> extra_cuts) {
    std::vector<Piece> pieces;
    std::vector<double> cuts(extra_cuts.begin(), extra_cuts.end());
    std::sort(cuts.begin(), cuts.end());
    dom.f().for_each_piece(rect.x_lo, rect.x_hi, [&](double x0, double x1, double f0, double f1) {
        double xs = x0, fs = f0;
        const double slope = (f1 - f0) / (x1 - x0);
        for (double cx : cuts) {
            if (cx > xs && cx < x1) {
                const double fc = f0 + slope * (cx - x0);
                pieces.push_back({xs, cx, fs, fc});
                xs = cx;
                fs = fc;
            }
        }
        pieces.push_back({xs, x1, fs, f1});
    });
    return pieces;
}

// integral of Phi(f(x) - C) for linear f over [xs, xe]
double integral_phi_linear(double e, double xs, double xe, double fs, double fe, double C) {
    const double w = xe - xs;
    if (w <= 0.0) return 0.0;
    const double slope = (fe - fs) / w;
    if (std::abs(slope) < 1e-14 * (std::abs(fs) + std::abs(fe) + 1.0))
        return w * pow_anti1(e, 0.5 * (fs + fe) - C);
    return (pow_anti2(e, fe - C) - pow_anti2(e, fs - C)) / slope;
}

}  // namespace

Rect chart_rect(const HolderSubgraphDomain& dom) {
    return Rect{dom.x_lo(), dom.x_hi(), dom.floor_y(), kInf};
}

QuadOptions quad_for_resolution(int resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    QuadOptions q;
    q.h_levels = 28 + 12 * resolution;
    q.x_order = std::min(4 + 2 * (resolution - 1), 12);
    q.h_order = 4;
    return q;
}

const YoungFunction& default_young() {
    static YoungFunction y{"shifted-xlogx",
                           [](double u) { return (1.0 + u) * std::log1p(u) - u; }};
    return y;
}

double power_region_integral(const HolderSubgraphDomain& dom, const Rect& rect, double e,
                             double eta) {
    if (eta < 0.0) throw std::invalid_argument("power_region_integral: eta must be >= 0");
    const double y_bot = std::max(rect.y_lo, dom.floor_y());
    const double y_top = rect.y_hi;
    if (!(y_top > y_bot)) return 0.0;

    double total = 0.0;
    dom.f().for_each_piece(rect.x_lo, rect.x_hi, [&](double x0, double x1, double f0, double f1) {
        const double slope = (f1 - f0) / (x1 - x0);
        // split where f crosses the empty-column level and the regime switch
        std::vector<double> cuts = {x0, x1};
        auto add_cross = [&](double level) {
            if (std::abs(slope) > 0.0) {
                const double xc = x0 + (level - f0) / slope;
                if (xc > x0 && xc < x1) cuts.push_back(xc);
            }
        };
        add_cross(y_bot + eta);
        if (std::isfinite(y_top)) add_cross(y_top + eta);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double xs = cuts[i], xe = cuts[i + 1];
            if (!(xe > xs)) continue;
            const double fs = f0 + slope * (xs - x0);
            const double fe = f0 + slope * (xe - x0);
            const double fm = 0.5 * (fs + fe);
            if (fm <= y_bot + eta) continue;  // empty column strip
            const bool regimeA = !std::isfinite(y_top) || fm <= y_top + eta;
            if (regimeA && eta == 0.0 && e <= -1.0 + 1e-13)
                throw std::domain_error("power_region_integral: non-integrable boundary singularity");
            const double term1 = integral_phi_linear(e, xs, xe, fs, fe, y_bot);
            double term2;
            if (regimeA)
                term2 = (eta == 0.0 ? (e > -1.0 ? 0.0 : -kInf) : pow_anti1(e, eta)) * (xe - xs);
            else
                term2 = integral_phi_linear(e, xs, xe, fs, fe, y_top);
            total += term1 - term2;
        }
    });
    return total;
}

double numeric_region_integral(const HolderSubgraphDomain& dom, const Rect& rect,
                               const std::function<double(const Point&, double)>& F, double eta,
                               const QuadOptions& q, std::span<const double> extra_x_cuts,
                               std::span<const double> extra_y_cuts) {
    const double y_bot = std::max(rect.y_lo, dom.floor_y());
    const double y_top = rect.y_hi;
    if (!(y_top > y_bot)) return 0.0;
    std::vector<Piece> pieces = collect_pieces(dom, rect, extra_x_cuts);
    std::vector<double> vals(pieces.size(), 0.0);
    const GaussRule& gx = gauss_rule(q.x_order);
    // grading deeper than ~2^-44 would push h below the ulp of f(x)
    const int levels = std::min(q.h_levels, 44);
#pragma omp parallel for schedule(static)
    for (std::int64_t pi = 0; pi < std::int64_t(pieces.size()); ++pi) {
        const Piece& pc = pieces[std::size_t(pi)];
        const double mid = 0.5 * (pc.x0 + pc.x1), half = 0.5 * (pc.x1 - pc.x0);
        const double slope = (pc.f1 - pc.f0) / (pc.x1 - pc.x0);
        double acc = 0.0;
        std::vector<double> hcuts;
        for (std::size_t g = 0; g < gx.nodes.size(); ++g) {
            const double x = mid + half * gx.nodes[g];
            const double fx = pc.f0 + slope * (x - pc.x0);
            const double h_top = fx - y_bot;
            const double h_bot = std::max(std::isfinite(y_top) ? fx - y_top : 0.0, eta);
            if (h_top <= h_bot) continue;
            auto Fh = [&](double h) { return F(Point{x, fx - h}, h); };
            hcuts.clear();
            for (double yc : extra_y_cuts) {
                const double hc = fx - yc;
                if (hc > h_bot * (1.0 + 1e-14) + 1e-300 && hc < h_top * (1.0 - 1e-14))
                    hcuts.push_back(hc);
            }
            std::sort(hcuts.begin(), hcuts.end());
            double inner = 0.0, prev = h_bot;
            for (std::size_t c = 0; c <= hcuts.size(); ++c) {
                const double next = (c < hcuts.size()) ? hcuts[c] : h_top;
                if (prev == h_bot)
                    inner += integrate_graded(Fh, prev, next, levels, q.h_order);
                else
                    inner += integrate_gauss(Fh, prev, next, 8);
                prev = next;
            }
            acc += gx.weights[g] * inner;
        }
        vals[std::size_t(pi)] = acc * half;
    }
    return ordered_sum(vals);
}

namespace {

// integral of G over (rect ∩ base box); 0 when there is no base box
double box_integral(const HolderSubgraphDomain& dom, const Rect& rect,
                    const std::function<double(const Point&)>& G) {
    if (!dom.has_base_box()) return 0.0;
    const BaseBox& b = dom.base_box();
    const double x0 = std::max(rect.x_lo, b.x_lo), x1 = std::min(rect.x_hi, b.x_hi);
    const double y0 = std::max(rect.y_lo, b.y_lo), y1 = std::min(rect.y_hi, b.y_hi);
    if (!(x1 > x0) || !(y1 > y0)) return 0.0;
    const int nx = 16, ny = 8;
    const GaussRule& g4 = gauss_rule(4);
    double total = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double ax = x0 + (x1 - x0) * i / nx, bx = x0 + (x1 - x0) * (i + 1) / nx;
            const double ay = y0 + (y1 - y0) * j / ny, by = y0 + (y1 - y0) * (j + 1) / ny;
            const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
            const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
            double cell = 0.0;
            for (std::size_t a = 0; a < g4.nodes.size(); ++a)
                for (std::size_t c = 0; c < g4.nodes.size(); ++c)
                    cell += g4.weights[a] * g4.weights[c] *
                            G(Point{mx + hx * g4.nodes[a], my + hy * g4.nodes[c]});
            total += cell * hx * hy;
        }
    }
    return total;
}

double box_area_clip(const HolderSubgraphDomain& dom, const Rect& rect) {
    if (!dom.has_base_box()) return 0.0;
    const BaseBox& b = dom.base_box();
    const double w = std::min(rect.x_hi, b.x_hi) - std::max(rect.x_lo, b.x_lo);
    const double h = std::min(rect.y_hi, b.y_hi) - std::max(rect.y_lo, b.y_lo);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

}  // namespace

double region_area(const HolderSubgraphDomain& dom, const Rect& rect) {
    return power_region_integral(dom, rect, 0.0, 0.0) + box_area_clip(dom, rect);
}

NormValue lp_norm_region(const PotentialField& V, const HolderSubgraphDomain& dom,
                         const Rect& rect, double p, int resolution) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    NormValue out;
    switch (V.kind()) {
        case PotentialField::Kind::Zero:
            return out;
        case PotentialField::Kind::Constant: {
            out.value = std::abs(V.value()) * std::pow(region_area(dom, rect), 1.0 / p);
            return out;
        }
        case PotentialField::Kind::HPower: {
            const double e = p * V.expo();
            try {
                const double raw =
                    std::pow(V.coeff(), p) * power_region_integral(dom, rect, e, 0.0);
                out.value = std::pow(raw, 1.0 / p);
                if (!std::isfinite(out.value)) {
                    out.divergent = true;
                    out.note = "exponent test: p*sigma <= -1";
                }
            } catch (const std::domain_error&) {
                // the rectangle reaches the graph and p*sigma <= -1
                out.divergent = true;
                out.value = kInf;
                out.note = "exponent test: p*sigma <= -1";
            }
            return out;
        }
        default: {
            const QuadOptions q = quad_for_resolution(resolution);
            auto sing = V.h_singularity();
            if (sing && p * (*sing) <= -1.0 + 1e-13) {
                out.divergent = true;
                out.value = kInf;
                out.note = "exponent test: p*sigma <= -1";
                return out;
            }
            auto cuts = V.x_cuts();
            auto ycuts = V.y_cuts();
            const double chart = numeric_region_integral(
                dom, rect,
                [&](const Point& pt, double) { return std::pow(std::abs(V.eval(dom, pt)), p); },
                0.0, q, cuts, ycuts);
            const double box = box_integral(dom, rect, [&](const Point& pt) {
                return std::pow(std::abs(V.eval(dom, pt)), p);
            });
            out.value = std::pow(chart + box, 1.0 / p);
            return out;
        }
    }
}

NormValue lp_norm(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                  int resolution) {
    Rect r = chart_rect(dom);
    if (dom.has_base_box()) {
        r.x_lo = std::min(r.x_lo, dom.base_box().x_lo);
        r.x_hi = std::max(r.x_hi, dom.base_box().x_hi);
        r.y_lo = std::min(r.y_lo, dom.base_box().y_lo);
    }
    return lp_norm_region(V, dom, r, p, resolution);
}

NormValue weighted_seminorm(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                            double beta, double eta, int resolution) {
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_seminorm: p must be >= 1");
    if (beta < 0.0) throw std::invalid_argument("weighted_seminorm: beta must be >= 0");
    if (eta < 0.0) throw std::invalid_argument("weighted_seminorm: eta must be >= 0");
    NormValue out;
    const Rect rect = chart_rect(dom);
    auto analytic_exponent = [&]() -> std::optional<double> {
        if (V.kind() == PotentialField::Kind::Zero) return std::nullopt;
        if (V.kind() == PotentialField::Kind::Constant) return -beta;
        if (V.kind() == PotentialField::Kind::HPower) return p * V.expo() - beta;
        if (auto s = V.h_singularity()) return p * (*s) - beta;
        return std::nullopt;
    };
    if (V.is_zero()) return out;
    if (auto e = analytic_exponent(); e && eta == 0.0 && *e <= -1.0 + 1e-13) {
        out.divergent = true;
        out.value = kInf;
        out.note = "exponent test: p*sigma - beta <= -1";
        return out;
    }
    switch (V.kind()) {
        case PotentialField::Kind::Constant: {
            const double raw = std::pow(std::abs(V.value()), p) *
                               power_region_integral(dom, rect, -beta, eta);
            out.value = std::pow(raw, 1.0 / p);
            return out;
        }
        case PotentialField::Kind::HPower: {
            const double raw = std::pow(V.coeff(), p) *
                               power_region_integral(dom, rect, p * V.expo() - beta, eta);
            out.value = std::pow(raw, 1.0 / p);
            return out;
        }
        default: {
            auto F = [&](const Point& pt, double h) {
                return std::pow(h, -beta) * std::pow(std::abs(V.eval(dom, pt)), p);
            };
            auto cuts = V.x_cuts();
            auto ycuts = V.y_cuts();
            QuadOptions q = quad_for_resolution(resolution);
            const double raw = numeric_region_integral(dom, rect, F, eta, q, cuts, ycuts);
            if (eta == 0.0 && !analytic_exponent()) {
                // stabilization test across a grading refinement
                QuadOptions q2 = q;
                q2.h_levels += 12;
                const double raw2 = numeric_region_integral(dom, rect, F, eta, q2, cuts, ycuts);
                if (raw > 0.0 && std::abs(raw2 - raw) / raw > 1e-3) {
                    out.divergent = true;
                    out.value = kInf;
                    out.note = "grading refinement did not stabilize";
                    return out;
                }
            }
            out.value = std::pow(raw, 1.0 / p);
            return out;
        }
    }
}

double orlicz_modular_region(const PotentialField& V, const HolderSubgraphDomain& dom,
                             const Rect& rect, double t, const YoungFunction& young,
                             int resolution) {
    if (!(t > 0.0)) throw std::invalid_argument("orlicz modular: t must be > 0");
    if (V.is_zero()) return 0.0;
    if (V.kind() == PotentialField::Kind::Constant)
        return young.B(std::abs(V.value()) / t) * region_area(dom, rect);
    const QuadOptions q = quad_for_resolution(resolution);
    auto cuts = V.x_cuts();
    auto ycuts = V.y_cuts();
    const double chart = numeric_region_integral(
        dom, rect,
        [&](const Point& pt, double) { return young.B(std::abs(V.eval(dom, pt)) / t); }, 0.0, q,
        cuts, ycuts);
    const double box = box_integral(
        dom, rect, [&](const Point& pt) { return young.B(std::abs(V.eval(dom, pt)) / t); });
    return chart + box;
}

NormValue orlicz_norm(const PotentialField& V, const HolderSubgraphDomain& dom,
                      const YoungFunction& young, int resolution) {
    NormValue out;
    if (V.is_zero()) return out;
    if (auto s = V.h_singularity(); s && *s <= -1.0 + 1e-13) {
        out.divergent = true;
        out.value = kInf;
        out.note = "modular integral infinite for every t (sigma <= -1)";
        return out;
    }
    Rect rect = chart_rect(dom);
    if (dom.has_base_box()) {
        rect.x_lo = std::min(rect.x_lo, dom.base_box().x_lo);
        rect.x_hi = std::max(rect.x_hi, dom.base_box().x_hi);
        rect.y_lo = std::min(rect.y_lo, dom.base_box().y_lo);
    }
    auto modular = [&](double t) {
        return orlicz_modular_region(V, dom, rect, t, young, resolution);
    };
    double t_hi = 1.0;
    int guard = 0;
    while (modular(t_hi) > 1.0) {
        t_hi *= 2.0;
        if (++guard > 120) {
            out.divergent = true;
            out.value = kInf;
            out.note = "no upper bisection bracket up to 2^120";
            return out;
        }
    }
    double t_lo = 0.5 * t_hi;
    guard = 0;
    while (modular(t_lo) < 1.0) {
        t_hi = t_lo;
        t_lo *= 0.5;
        if (++guard > 200) {
            out.value = 0.0;
            out.note = "modular < 1 down to 2^-200; norm ~ 0";
            return out;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        const double g = modular(t);
        if (std::abs(g - 1.0) <= 1e-8) {
            out.value = t;
            return out;
        }
        (g > 1.0 ? t_lo : t_hi) = t;
        if ((t_hi - t_lo) <= 1e-15 * t_hi) break;
    }
    out.value = 0.5 * (t_lo + t_hi);
    return out;
}

CombinedNorm combined_norm(const PotentialField& V, const HolderSubgraphDomain& dom,
                           const ExponentSet& es, int resolution, double eta) {
    CombinedNorm out;
    NormValue bulk;
    if (es.d == 2)
        bulk = orlicz_norm(V, dom, default_young(), resolution);
    else
        bulk = lp_norm(V, dom, es.d / 2.0, resolution);
    NormValue semi = weighted_seminorm(V, dom, es.ptilde, es.beta, eta, resolution);
    out.bulk = bulk.value;
    out.seminorm = semi.value;
    out.divergent = bulk.divergent || semi.divergent;
    out.value = out.divergent ? kInf : bulk.value + semi.value;
    out.note = bulk.note.empty() ? semi.note : bulk.note + "; " + semi.note;
    return out;
}

NormComparison norm_comparison(const PotentialField& V, const HolderSubgraphDomain& dom, double p,
                               const ExponentSet& es, int resolution) {
    if (!(es.beta < 1.0))
        throw std::invalid_argument("norm_comparison: requires beta < 1");
    NormComparison out;
    out.threshold_p = es.ptilde / (1.0 - es.beta);
    if (!(p > out.threshold_p))
        throw std::invalid_argument("norm_comparison: requires p > ptilde/(1-beta)");
    CombinedNorm lhs = combined_norm(V, dom, es, resolution);
    NormValue rhs = lp_norm(V, dom, p, resolution);
    out.lhs = lhs.value;
    out.rhs = rhs.value;
    out.divergent = lhs.divergent || rhs.divergent;
    return out;
}

DivergenceSlope divergence_slope(const PotentialField& V, const HolderSubgraphDomain& dom,
                                 double p, double beta, std::vector<double> eta_grid,
                                 int resolution) {
    DivergenceSlope out;
    std::sort(eta_grid.begin(), eta_grid.end(), std::greater<double>());
    if (eta_grid.size() < 3) {
        out.degenerate = true;
        return out;
    }
    if (!(eta_grid.front() / eta_grid.back() >= 100.0))
        throw std::invalid_argument("divergence_slope: eta grid must span >= 2 decades");
    out.eta = eta_grid;
    std::vector<double> lx, ly;
    for (double eta : eta_grid) {
        NormValue nv = weighted_seminorm(V, dom, p, beta, eta, resolution);
        out.values.push_back(std::pow(nv.value, p));
    }
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (out.values[i] > 0.0) {
            lx.push_back(std::log(1.0 / eta_grid[i]));
            ly.push_back(std::log(out.values[i]));
        }
    }
    if (lx.size() >= 2) out.loglog_slope = least_squares(lx, ly).slope;
    const std::size_t n = out.values.size();
    out.eta_derivative = (out.values[n - 1] - out.values[n - 2]) /
                         std::log(eta_grid[n - 2] / eta_grid[n - 1]);
    // analytic exponent when the potential exposes one; otherwise ask whether
    // the truncated integrals are still growing at the finest scales
    std::optional<double> sig;
    if (V.kind() == PotentialField::Kind::Constant) sig = 0.0;
    if (auto s = V.h_singularity()) sig = *s;
    if (V.is_zero()) {
        out.divergent = false;
    } else if (sig) {
        out.divergent = (p * (*sig) - beta) <= -1.0 + 1e-13;
    } else {
        const double rel = (out.values[n - 1] - out.values[n - 2]) /
                           std::max(out.values[n - 1], 1e-300);
        out.divergent = rel > 1e-3;
    }
    return out;
}

}  // namespace holspec
