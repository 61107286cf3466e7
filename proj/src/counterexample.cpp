#include "holspec/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <omp.h>

#include "holspec/quadrature.hpp"
#include "holspec/rng.hpp"

namespace holspec {

namespace {

void validate(const ExampleConfig& cfg) {
    if (cfg.d != 2) throw std::invalid_argument("example: numerics are d=2 only");
    const double eps_max = double(cfg.d - 1) * (1.0 / cfg.gamma - 1.0);
    if (!(cfg.epsilon > 0.0) || cfg.epsilon > eps_max + 1e-15)
        throw std::invalid_argument("example: epsilon must lie in (0, (d-1)(1/gamma-1)]");
}

}  // namespace

ExampleConstants example_constants(int d) {
    if (d < 2) throw std::invalid_argument("example_constants: d >= 2");
    ExampleConstants c;
    // int_0^a sin^2 = a/2 - sin(2a)/4, int_0^1 cos^2 = 1/2 + sin(2)/4
    c.b2 = std::pow(2.0, -(d - 1)) * (1.0 / 16.0 - std::sin(0.25) / 4.0);
    c.bnabla = 0.5 + std::sin(2.0) / 4.0;
    c.bV = 2.0 * c.bnabla / c.b2;
    return c;
}

std::pair<HolderSubgraphDomain, PotentialField> build_example(const ExampleConfig& cfg) {
    validate(cfg);
    FractalParams fp;
    fp.gamma = cfg.gamma;
    fp.m = cfg.m;
    fp.n_max = cfg.n_max;
    fp.d = cfg.d;
    HolderSubgraphDomain dom = build_fractal_domain(fp, /*base_box=*/true);
    const ExampleConstants c = example_constants(cfg.d);
    const double sigma = (2.0 / cfg.d) * (-1.0 + cfg.epsilon);
    return {std::move(dom), PotentialField::h_power(c.bV, sigma)};
}

EpsilonInfo epsilon_admissible(int d, double gamma, int grid) {
    if (!(gamma > double(d - 1) / d) || !(gamma < 1.0))
        throw std::invalid_argument("epsilon_admissible: gamma must be in ((d-1)/d, 1)");
    EpsilonInfo info;
    info.eps_max = double(d - 1) * (1.0 / gamma - 1.0);
    const double mu = double(d - 1) / gamma + 1.0;
    info.lp_ok_at_max = mu * (mu - double(d + 1)) > -double(d);
    auto cubic = [&](double m) {
        return (m * m * (m - double(d + 1))) / double(d * d) -
               m / double(d + 1) * (m * m / double(d) - double(d));
    };
    info.f_at_d = cubic(double(d));
    info.f_grid_max = -1e300;
    for (int i = 1; i < grid; ++i) {
        const double m = double(d) + double(i) / double(grid);
        info.f_grid_max = std::max(info.f_grid_max, cubic(m));
    }
    info.f_below_minus1 = info.f_grid_max <= -1.0 + 1e-12;
    return info;
}

double lambda_schedule_log2(const ExampleConfig& cfg, int n) {
    if (n < 0) throw std::invalid_argument("lambda_schedule: n >= 0");
    return cfg.gamma * cfg.m * n * (2.0 + (2.0 / cfg.d) * (-1.0 + cfg.epsilon));
}

double lambda_schedule(const ExampleConfig& cfg, int n) {
    return std::exp2(lambda_schedule_log2(cfg, n));
}

namespace {

// J(H) = int_0^H t^sigma sin^2(omega (H - t)) dt with the singular head pulled
// out analytically; the oscillation is mild because omega * H <= 1 on every
// spike cell
double singular_oscillatory_integral(double H, double sigma, double omega) {
    if (!(H > 0.0)) return 0.0;
    const double head = std::pow(H, 1.0 + sigma) / (2.0 * (1.0 + sigma));
    // C = int_0^H t^sigma cos(2 omega (H - t)) dt
    const double s = H * std::exp2(-20);
    const double c0 = std::cos(2.0 * omega * H), s0 = std::sin(2.0 * omega * H);
    double C = c0 * std::pow(s, 1.0 + sigma) / (1.0 + sigma) +
               2.0 * omega * s0 * std::pow(s, 2.0 + sigma) / (2.0 + sigma);
    C += integrate_graded(
        [&](double t) { return std::pow(t, sigma) * std::cos(2.0 * omega * (H - t)); }, s, H, 20,
        6);
    return head - 0.5 * C;
}

struct CellIntegrals {
    double l2 = 0.0, grad = 0.0, potJ = 0.0;  // potJ = int of J(H(x)) over the cell
};

CellIntegrals integrate_cell(const BoundaryFunction& f, int n, std::int64_t k, double sigma,
                             double omega) {
    CellIntegrals out;
    const double w = f.cell_width(n);
    const double x0 = double(k) * w, x1 = double(k + 1) * w;
    const double a_nk = f.spike_base(n, k);
    auto I2 = [&](double H) {
        return H <= 0.0 ? 0.0 : 0.5 * H - std::sin(2.0 * omega * H) / (4.0 * omega);
    };
    auto Ic = [&](double H) {
        return H <= 0.0 ? 0.0 : 0.5 * H + std::sin(2.0 * omega * H) / (4.0 * omega);
    };
    const GaussRule& g8 = gauss_rule(8);
    f.for_each_piece(x0, x1, [&](double px0, double px1, double f0, double f1) {
        const double H0 = f0 - a_nk, H1 = f1 - a_nk;
        // split at the zero crossing of H
        double cuts[3] = {px0, px1, px1};
        int nc = 2;
        if ((H0 > 0.0) != (H1 > 0.0)) {
            const double xc = px0 + (px1 - px0) * (0.0 - H0) / (H1 - H0);
            if (xc > px0 && xc < px1) {
                cuts[1] = xc;
                cuts[2] = px1;
                nc = 3;
            }
        }
        for (int c = 0; c + 1 < nc; ++c) {
            const double xs = cuts[c], xe = cuts[c + 1];
            const double Hs = H0 + (H1 - H0) * (xs - px0) / (px1 - px0);
            const double He = H0 + (H1 - H0) * (xe - px0) / (px1 - px0);
            if (0.5 * (Hs + He) <= 0.0) continue;  // mode vanishes here
            const double mid = 0.5 * (xs + xe), half = 0.5 * (xe - xs);
            for (std::size_t q = 0; q < g8.nodes.size(); ++q) {
                const double x = mid + half * g8.nodes[q];
                const double H = Hs + (He - Hs) * (x - xs) / (xe - xs);
                const double wq = g8.weights[q] * half;
                out.l2 += wq * I2(H);
                out.grad += wq * Ic(H);
                out.potJ += wq * singular_oscillatory_integral(H, sigma, omega);
            }
        }
    });
    out.grad *= omega * omega;
    return out;
}

}  // namespace

RayleighForm rayleigh_form(const ExampleConfig& cfg, int n, std::int64_t k, double lambda) {
    validate(cfg);
    if (n < 0 || n > cfg.n_max)
        throw std::invalid_argument("rayleigh_form: n must lie in [0, n_max]");
    FractalParams fp{cfg.gamma, cfg.m, cfg.n_max, cfg.d};
    BoundaryFunction f = BoundaryFunction::fractal(fp);
    if (k < 0 || k >= f.num_cells(n)) throw std::invalid_argument("rayleigh_form: k outside K_n");
    const ExampleConstants c = example_constants(cfg.d);
    const double sigma = (2.0 / cfg.d) * (-1.0 + cfg.epsilon);
    const double omega = std::exp2(cfg.gamma * cfg.m * n);

    const CellIntegrals ci = integrate_cell(f, n, k, sigma, omega);
    RayleighForm rf;
    rf.l2 = ci.l2;
    rf.grad_term = ci.grad;
    rf.pot_term = -lambda * c.bV * ci.potJ;
    rf.total = rf.grad_term + rf.pot_term;
    const double scale = std::exp2(-double(cfg.d - 1) * cfg.m * n);
    const double l2_lower = c.b2 * scale * std::exp2(-cfg.gamma * cfg.m * n);
    const double grad_upper = c.bnabla * scale * std::exp2(cfg.gamma * cfg.m * n);
    rf.bounds_ok = (rf.l2 >= l2_lower * (1.0 - 1e-9)) &&
                   (rf.grad_term <= grad_upper * (1.0 + 1e-9));
    return rf;
}

CertReport certify(const ExampleConfig& cfg, int n, std::uint64_t seed,
                   std::int64_t class_budget, bool parallel) {
    validate(cfg);
    if (n < 0 || n > cfg.n_max) throw std::invalid_argument("certify: n must lie in [0, n_max]");
    FractalParams fp{cfg.gamma, cfg.m, cfg.n_max, cfg.d};
    BoundaryFunction f = BoundaryFunction::fractal(fp);
    const std::int64_t kn = f.num_cells(n);

    CertReport rep;
    rep.lambda_log2 = lambda_schedule_log2(cfg, n);
    rep.lambda = std::exp2(rep.lambda_log2);
    rep.count_lower_bound = kn;  // = 2^{(d-1) m n} for d = 2
    rep.ratio_log2 = cfg.m * n * (double(cfg.d - 1) - cfg.gamma * (double(cfg.d - 1) + cfg.epsilon));
    rep.ratio = std::exp2(rep.ratio_log2);

    auto eval_cell = [&](std::int64_t k) { return rayleigh_form(cfg, n, k, rep.lambda); };

    rep.worst_total = -1e300;
    if (kn <= class_budget) {
        rep.cells_evaluated = kn;
        std::vector<double> totals(static_cast<std::size_t>(kn));
        std::vector<std::uint8_t> ok(static_cast<std::size_t>(kn));
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
        for (std::int64_t k = 0; k < kn; ++k) {
            const RayleighForm rf = eval_cell(k);
            totals[std::size_t(k)] = rf.total;
            ok[std::size_t(k)] = rf.bounds_ok ? 1 : 0;
        }
        rep.all_negative = true;
        for (std::int64_t k = 0; k < kn; ++k) {
            if (totals[std::size_t(k)] > rep.worst_total) {
                rep.worst_total = totals[std::size_t(k)];
                if (totals[std::size_t(k)] >= 0.0) rep.offending_k = k;
            }
            if (totals[std::size_t(k)] >= 0.0 || !ok[std::size_t(k)]) rep.all_negative = false;
        }
        rep.classes = kn;
        return rep;
    }

    // congruence classes: the spike profile relative to the local base
    // f_{n-1} depends only on |slope of f_{n-1}| on the cell
    rep.used_classes = true;
    std::map<double, std::pair<std::int64_t, std::int64_t>> classes;  // |slope| -> (rep k, count)
    for (std::int64_t k = 0; k < kn; ++k) {
        const double key = std::abs(f.base_slope(n, k));
        auto it = classes.find(key);
        if (it == classes.end())
            classes.emplace(key, std::make_pair(k, std::int64_t(1)));
        else
            it->second.second++;
    }
    rep.classes = std::int64_t(classes.size());
    rep.all_negative = true;
    for (const auto& [key, kc] : classes) {
        const RayleighForm rf = eval_cell(kc.first);
        rep.cells_evaluated++;
        if (rf.total > rep.worst_total) rep.worst_total = rf.total;
        if (rf.total >= 0.0 || !rf.bounds_ok) {
            rep.all_negative = false;
            rep.offending_k = kc.first;
        }
    }
    // verify the congruence claim on random same-class pairs
    auto gen = rng_stream(seed, "counterexample.symmetry");
    std::vector<std::vector<std::int64_t>> members(classes.size());
    {
        std::vector<double> keys;
        for (const auto& [key, kc] : classes) keys.push_back(key);
        std::map<double, std::size_t> key_index;
        for (std::size_t i = 0; i < keys.size(); ++i) key_index[keys[i]] = i;
        for (std::int64_t k = 0; k < kn; ++k)
            members[key_index[std::abs(f.base_slope(n, k))]].push_back(k);
    }
    rep.max_symmetry_rel_diff = 0.0;
    int pairs_done = 0;
    for (int attempt = 0; attempt < 100 && pairs_done < 10; ++attempt) {
        const std::size_t ci = std::size_t(gen() % members.size());
        if (members[ci].size() < 2) continue;
        const std::int64_t k1 = members[ci][std::size_t(gen() % members[ci].size())];
        const std::int64_t k2 = members[ci][std::size_t(gen() % members[ci].size())];
        if (k1 == k2) continue;
        const RayleighForm a = eval_cell(k1), b = eval_cell(k2);
        const double rel =
            std::max({std::abs(a.l2 - b.l2) / std::max(std::abs(a.l2), 1e-300),
                      std::abs(a.grad_term - b.grad_term) / std::max(std::abs(a.grad_term), 1e-300),
                      std::abs(a.pot_term - b.pot_term) / std::max(std::abs(a.pot_term), 1e-300)});
        rep.max_symmetry_rel_diff = std::max(rep.max_symmetry_rel_diff, rel);
        ++pairs_done;
    }
    rep.symmetry_verified = pairs_done > 0 && rep.max_symmetry_rel_diff < 1e-8;
    return rep;
}

}  // namespace holspec
