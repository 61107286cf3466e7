// Command-line driver: one subcommand per experiment, JSON config file plus
// flag overrides, artifacts written under --out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "holspec/run.hpp"

using nlohmann::json;

namespace {

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    json j;
    f >> j;
    return j;
}

json parse_inline(const std::string& text) {
    // accept either inline JSON or a path to a JSON file
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) return json::parse(text);
    return load_config(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"holspec: negative-eigenvalue counting on Hoelder subgraph domains"};
    app.require_subcommand(1);
    app.fallthrough();

    json cfg;
    std::string config_file, out_dir = "out";
    std::string domain_spec, potential_spec;
    double gamma = 0.0, c = 1.0, p = 0.0, beta = -1.0, delta0 = 0.0, mesh_h = 0.0, lambda = 0.0,
           sigma = 0.0, epsilon = 0.0, qstar = 0.0, delta = 0.5, target_h = 0.015625;
    int d = 2, m = 0, n = 0, n_max = -1, quad_res = 1, elems = 24, max_iter = 400;
    std::uint64_t seed = 1;
    std::vector<double> lambdas, etas, delta_grid, m_grid;
    std::vector<int> m_levels;
    std::string bc = "neumann", region = "full", kind = "tent", mode = "poincare";
    bool export_breakpoints = false, export_mesh = false;

    app.add_option("--config", config_file, "JSON config file; flags override its fields");
    app.add_option("--out", out_dir, "artifact directory");
    app.add_option("--seed", seed, "seed for every random stream");
    app.add_option("--quad-res", quad_res, "quadrature resolution knob");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--domain", domain_spec, "domain spec (inline JSON or file)");
        sub->add_option("--potential", potential_spec, "potential spec (inline JSON or file)");
    };

    auto* c_exp = app.add_subcommand("exponents", "closed-form exponent set and identity residuals");
    c_exp->add_option("--d", d);
    c_exp->add_option("--gamma", gamma)->required();
    c_exp->add_option("--c", c);

    auto* c_dom = app.add_subcommand("build-domain", "construct a domain and report its geometry");
    add_common(c_dom);
    c_dom->add_flag("--export-breakpoints", export_breakpoints);

    auto* c_norms = app.add_subcommand("norms", "Lp, weighted seminorm, Orlicz and combined norms");
    add_common(c_norms);
    c_norms->add_option("--gamma", gamma);
    c_norms->add_option("--c", c);
    c_norms->add_option("--p", p);
    c_norms->add_option("--beta", beta);
    c_norms->add_option("--eta", etas, "eta grid for the divergence slope");

    auto* c_cover = app.add_subcommand("cover", "greedy Besicovitch-type covering");
    add_common(c_cover);
    c_cover->add_option("--delta0", delta0)->required();
    c_cover->add_option("--gamma", gamma);
    c_cover->add_option("--region", region, "boundary | interior | full");

    auto* c_count = app.add_subcommand("count", "negative-eigenvalue count via matrix inertia");
    add_common(c_count);
    c_count->add_option("--lambda", lambda)->required();
    c_count->add_option("--sigma", sigma);
    c_count->add_option("--mesh-h", mesh_h)->required();
    c_count->add_option("--bc", bc, "neumann | dirichlet");
    c_count->add_flag("--export-mesh", export_mesh);

    auto* c_weyl = app.add_subcommand("weyl-scan", "counts along a lambda grid vs semiclassics");
    add_common(c_weyl);
    c_weyl->add_option("--lambda", lambdas)->required();
    c_weyl->add_option("--mesh-h", mesh_h)->required();
    c_weyl->add_option("--bc", bc);

    auto* c_br = app.add_subcommand("bracketing", "Dirichlet-Neumann cube bracketing");
    add_common(c_br);
    c_br->add_option("--m-level", m_levels)->required();
    c_br->add_option("--lambda", lambdas)->required();
    c_br->add_option("--mesh-h", mesh_h)->required();

    auto* c_clr = app.add_subcommand("clr-check", "count * delta0^d boundedness diagnostic");
    add_common(c_clr);
    c_clr->add_option("--gamma", gamma)->required();
    c_clr->add_option("--lambda", lambdas)->required();
    c_clr->add_option("--mesh-h", mesh_h)->required();

    auto* c_cert = app.add_subcommand("certify-example", "quadrature certificate for the blow-up example");
    c_cert->add_option("--gamma", gamma)->required();
    c_cert->add_option("--m", m)->required();
    c_cert->add_option("--n", n)->required();
    c_cert->add_option("--n-max", n_max);
    c_cert->add_option("--epsilon", epsilon)->required();

    auto* c_poin = app.add_subcommand("poincare-scan", "Poincare / Poincare-Sobolev scaling scans");
    c_poin->add_option("--mode", mode, "poincare | ps");
    c_poin->add_option("--kind", kind, "square | tent");
    c_poin->add_option("--delta-grid", delta_grid);
    c_poin->add_option("--elems", elems);
    c_poin->add_option("--m-grid", m_grid);
    c_poin->add_option("--qstar", qstar);
    c_poin->add_option("--delta", delta);
    c_poin->add_option("--target-h", target_h);
    c_poin->add_option("--max-iter", max_iter);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) cfg = load_config(config_file);
        cfg["out"] = out_dir;
        cfg["seed"] = seed;
        cfg["quad_res"] = quad_res;
        if (!domain_spec.empty()) cfg["domain"] = parse_inline(domain_spec);
        if (!potential_spec.empty()) cfg["potential"] = parse_inline(potential_spec);

        if (c_exp->parsed()) {
            cfg["command"] = "exponents";
            cfg["d"] = d;
            cfg["gamma"] = gamma;
            cfg["c"] = c;
        } else if (c_dom->parsed()) {
            cfg["command"] = "build-domain";
            if (export_breakpoints) cfg["export_breakpoints"] = true;
        } else if (c_norms->parsed()) {
            cfg["command"] = "norms";
            if (gamma > 0) cfg["gamma"] = gamma;
            if (p > 0) cfg["p"] = p;
            if (beta >= 0) cfg["beta"] = beta;
            if (!etas.empty()) cfg["eta_grid"] = etas;
        } else if (c_cover->parsed()) {
            cfg["command"] = "cover";
            cfg["delta0"] = delta0;
            if (gamma > 0) cfg["gamma"] = gamma;
            cfg["region"] = region;
        } else if (c_count->parsed()) {
            cfg["command"] = "count";
            cfg["lambda"] = lambda;
            cfg["sigma"] = sigma;
            cfg["mesh_h"] = mesh_h;
            cfg["bc"] = bc;
            if (export_mesh) cfg["export_mesh"] = true;
        } else if (c_weyl->parsed()) {
            cfg["command"] = "weyl-scan";
            cfg["lambdas"] = lambdas;
            cfg["mesh_h"] = mesh_h;
            cfg["bc"] = bc;
        } else if (c_br->parsed()) {
            cfg["command"] = "bracketing";
            cfg["m_levels"] = m_levels;
            cfg["lambdas"] = lambdas;
            cfg["mesh_h"] = mesh_h;
        } else if (c_clr->parsed()) {
            cfg["command"] = "clr-check";
            cfg["gamma"] = gamma;
            cfg["lambdas"] = lambdas;
            cfg["mesh_h"] = mesh_h;
        } else if (c_cert->parsed()) {
            cfg["command"] = "certify-example";
            cfg["gamma"] = gamma;
            cfg["m"] = m;
            cfg["n"] = n;
            if (n_max >= 0) cfg["n_max"] = n_max;
            cfg["epsilon"] = epsilon;
        } else if (c_poin->parsed()) {
            cfg["command"] = "poincare-scan";
            cfg["mode"] = mode;
            cfg["kind"] = kind == "square" ? "square" : "tent";
            if (!delta_grid.empty()) cfg["delta_grid"] = delta_grid;
            cfg["elems_across"] = elems;
            if (!m_grid.empty()) cfg["m_grid"] = m_grid;
            if (qstar > 0) cfg["qstar"] = qstar;
            cfg["delta"] = delta;
            cfg["target_h"] = target_h;
            cfg["max_iter"] = max_iter;
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return holspec::kExitConfig;
    }

    holspec::RunOutput ro = holspec::run(holspec::RunConfig{cfg});
    for (const std::string& a : ro.artifacts) std::cout << "wrote " << a << "\n";
    if (ro.exit_code != 0) std::cerr << ro.message << "\n";
    return ro.exit_code;
}
