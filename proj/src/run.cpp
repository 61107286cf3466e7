#include "holspec/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "holspec/counterexample.hpp"
#include "holspec/covering.hpp"
#include "holspec/exponents.hpp"
#include "holspec/inertia.hpp"
#include "holspec/norms.hpp"
#include "holspec/spectral.hpp"
#include "holspec/util.hpp"
#include "holspec/weyl.hpp"

namespace holspec {

using nlohmann::json;

HolderSubgraphDomain parse_domain(const json& spec) {
    const std::string type = spec.at("type").get<std::string>();
    std::optional<double> h_omega;
    if (spec.contains("h_omega")) h_omega = spec["h_omega"].get<double>();
    if (type == "fractal") {
        FractalParams p;
        p.gamma = spec.at("gamma").get<double>();
        p.m = spec.at("m").get<int>();
        p.n_max = spec.at("n_max").get<int>();
        const bool base = spec.value("base_box", true);
        return build_fractal_domain(p, base, h_omega);
    }
    if (type == "flat") {
        const double height = spec.at("height").get<double>();
        const double width = spec.value("width", 1.0);
        return build_flat_domain(height, width, h_omega);
    }
    if (type == "samples") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : spec.at("points"))
            pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        const double gamma = spec.value("gamma", 1.0);
        const double c = spec.value("c", 1.0);
        return build_sampled_domain(std::move(pts), gamma, c, h_omega);
    }
    throw std::invalid_argument("domain.type must be fractal | flat | samples");
}

PotentialField parse_potential(const json& spec) {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "zero") return PotentialField::zero();
    if (type == "constant") return PotentialField::constant(spec.at("value").get<double>());
    if (type == "h_power")
        return PotentialField::h_power(spec.at("coeff").get<double>(),
                                       spec.at("exponent").get<double>());
    if (type == "tent")
        return PotentialField::tent2d(
            Point{spec.at("center").at(0).get<double>(), spec.at("center").at(1).get<double>()},
            spec.at("halfwidth").get<double>(), spec.at("depth").get<double>());
    if (type == "example") {
        const int d = spec.value("d", 2);
        const double eps = spec.at("epsilon").get<double>();
        const ExampleConstants c = example_constants(d);
        return PotentialField::h_power(c.bV, (2.0 / d) * (-1.0 + eps));
    }
    throw std::invalid_argument("potential.type must be zero | constant | h_power | tent | example");
}

namespace {

std::string artifact_path(const json& cfg, const std::string& command, const std::string& ext) {
    const std::string out = cfg.value("out", std::string("out"));
    std::filesystem::create_directories(out);
    const std::string tag = hex8(fnv1a(cfg.dump()));
    return out + "/" + command + "-" + tag + "." + ext;
}

void write_file(const std::string& path, const std::string& body,
                std::vector<std::string>& artifacts) {
    std::ofstream f(path, std::ios::binary);
    f << body;
    artifacts.push_back(path);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json cover_to_json(const CoverFamilies& cf, const CoverReport& rep) {
    json doms = json::array();
    auto kind_name = [](AKind k) {
        switch (k) {
            case AKind::CuboidDelta: return "cuboid-a-eq-delta";
            case AKind::CuboidC0H: return "cuboid-a-eq-c0h";
            case AKind::GraphCapped: return "graph-capped";
            case AKind::InteriorCube: return "interior-cube";
        }
        return "?";
    };
    auto tag_name = [](CaseTag t) {
        switch (t) {
            case CaseTag::Interior: return "interior";
            case CaseTag::Case1: return "case1";
            case CaseTag::Case2: return "case2";
            case CaseTag::Case3: return "case3";
        }
        return "?";
    };
    for (const auto& d : cf.domains)
        doms.push_back({{"center", {d.center.x, d.center.y}},
                        {"delta", d.delta},
                        {"a", d.a},
                        {"kind", kind_name(d.kind)},
                        {"case", tag_name(d.case_tag)}});
    json fams = json::array();
    for (const auto& f : cf.families) fams.push_back(f.members);
    return json{{"domains", doms},
                {"families", fams},
                {"report",
                 {{"pairwise_disjoint", rep.pairwise_disjoint},
                  {"coverage_fraction", rep.coverage_fraction},
                  {"k_used", rep.k_used},
                  {"j_interior", rep.j_interior},
                  {"j_case1", rep.j_case1},
                  {"j_case2", rep.j_case2},
                  {"j_case3", rep.j_case3}}}};
}

}  // namespace

RunOutput run(const RunConfig& cfg) {
    RunOutput out;
    const json& j = cfg.j;
    std::string command;
    try {
        command = j.at("command").get<std::string>();
    } catch (const std::exception&) {
        out.exit_code = kExitConfig;
        out.message = "config error at 'command': missing or not a string";
        return out;
    }
    try {
        json result;
        result["config"] = j;
        result["seed"] = j.value("seed", 1);
        result["version"] = "holspec 0.1";
        const int quad_res = j.value("quad_res", 1);

        if (command == "exponents") {
            const ExponentSet es = compute_exponents(j.at("d").get<int>(),
                                                     j.at("gamma").get<double>(),
                                                     j.value("c", 1.0));
            const IdentityReport rep = verify_exponent_identities(es);
            result["exponents"] = json::parse(to_json(es, rep));
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (!rep.ok) {
                out.exit_code = kExitNumerical;
                out.message = "identity residuals exceeded tolerance";
            }
            return out;
        }
        if (command == "build-domain") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            result["area"] = dom.area();
            result["h_omega"] = dom.h_omega();
            result["truncation_tail"] = dom.truncation_tail();
            result["breakpoints"] = dom.f().num_breakpoints();
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (j.value("export_breakpoints", false))
                write_file(artifact_path(j, command, "csv"), dom.breakpoints_csv(), out.artifacts);
            return out;
        }
        if (command == "norms") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField V = parse_potential(j.at("potential"));
            const ExponentSet es = compute_exponents(2, j.at("gamma").get<double>(),
                                                     j.value("c", dom.c()));
            const double p = j.value("p", es.ptilde);
            const double beta = j.value("beta", es.beta);
            NormValue lp = lp_norm(V, dom, p, quad_res);
            NormValue semi = weighted_seminorm(V, dom, p, beta, j.value("eta", 0.0), quad_res);
            NormValue orl = orlicz_norm(V, dom, default_young(), quad_res);
            CombinedNorm comb = combined_norm(V, dom, es, quad_res);
            result["lp"] = lp.value;
            result["seminorm"] = semi.value;
            result["orlicz"] = orl.value;
            result["combined"] = comb.value;
            result["divergence_flags"] = {{"lp", lp.divergent},
                                          {"seminorm", semi.divergent},
                                          {"orlicz", orl.divergent},
                                          {"combined", comb.divergent}};
            if (j.contains("eta_grid")) {
                std::vector<double> etas = j["eta_grid"].get<std::vector<double>>();
                DivergenceSlope ds = divergence_slope(V, dom, p, beta, etas, quad_res);
                result["divergence_slope"] = {{"loglog_slope", ds.loglog_slope},
                                              {"eta_derivative", ds.eta_derivative},
                                              {"divergent", ds.divergent},
                                              {"values", ds.values}};
            }
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (lp.divergent || semi.divergent || orl.divergent) {
                out.exit_code = kExitNumerical;
                out.message = "a norm diverged";
            }
            return out;
        }
        if (command == "cover") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField V = parse_potential(j.at("potential"));
            const ExponentSet es = compute_exponents(2, j.value("gamma", dom.gamma()),
                                                     j.value("c", dom.c()));
            CoverConfig cc;
            cc.quad_res = quad_res;
            if (j.contains("probe_dx")) cc.probe_dx = j["probe_dx"].get<double>();
            if (j.contains("probe_dy")) cc.probe_dy = j["probe_dy"].get<double>();
            const std::string region = j.value("region", std::string("full"));
            const CoverRegion reg = region == "interior"  ? CoverRegion::Interior
                                    : region == "boundary" ? CoverRegion::Boundary
                                                           : CoverRegion::Full;
            CoverFamilies cf =
                greedy_cover(dom, V, j.at("delta0").get<double>(), es, reg, cc);
            CoverReport rep = verify_cover(cf, dom);
            result["cover"] = cover_to_json(cf, rep);
            result["count_times_delta0_d"] = count_vs_bound(cf, cf.delta0, es.d);
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (!rep.pairwise_disjoint || rep.coverage_fraction < 1.0) {
                out.exit_code = kExitNumerical;
                out.message = "cover verification failed";
            }
            return out;
        }
        if (command == "count") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField V = parse_potential(j.at("potential"));
            Mesh mesh = triangulate(dom, j.at("mesh_h").get<double>());
            const BC bc = j.value("bc", std::string("neumann")) == "dirichlet" ? BC::Dirichlet
                                                                               : BC::Neumann;
            DiscreteOperator op =
                assemble(mesh, dom, V, j.at("lambda").get<double>(), bc, true);
            CountResult cr = count_below(op, j.value("sigma", 0.0), true);
            result["count"] = cr.count;
            result["inertia"] = {cr.inertia.n_minus, cr.inertia.n_zero, cr.inertia.n_plus};
            result["sigma_used"] = cr.sigma_used;
            result["mesh"] = {{"vertices", mesh.n_vertices()},
                              {"triangles", mesh.triangles.size()},
                              {"area", mesh.area()},
                              {"lines", mesh.n_lines()}};
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (j.value("export_mesh", false))
                write_file(artifact_path(j, command, "csv"), mesh_csv(mesh), out.artifacts);
            return out;
        }
        if (command == "weyl-scan") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField V = parse_potential(j.at("potential"));
            std::vector<double> lams = j.at("lambdas").get<std::vector<double>>();
            const BC bc = j.value("bc", std::string("neumann")) == "dirichlet" ? BC::Dirichlet
                                                                               : BC::Neumann;
            auto rows = weyl_scan(dom, V, lams, j.at("mesh_h").get<double>(), bc, quad_res);
            std::string csv = "lambda,fem_count,semiclassical,ratio,mesh_h\n";
            for (const auto& r : rows)
                csv += fmt(r.lambda) + "," + std::to_string(r.fem_count) + "," +
                       fmt(r.semiclassical) + "," + fmt(r.ratio) + "," + fmt(r.mesh_h) + "\n";
            write_file(artifact_path(j, command, "csv"), csv, out.artifacts);
            json jr = json::array();
            for (const auto& r : rows)
                jr.push_back({{"lambda", r.lambda},
                              {"fem_count", r.fem_count},
                              {"semiclassical", r.semiclassical},
                              {"ratio", r.ratio}});
            result["rows"] = jr;
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            return out;
        }
        if (command == "bracketing") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField W = parse_potential(j.at("potential"));
            std::string csv = "m_level,lambda,sum_dirichlet,global,sum_neumann,cubes,sandwich\n";
            bool all_ok = true;
            for (int m : j.at("m_levels").get<std::vector<int>>()) {
                for (double lam : j.at("lambdas").get<std::vector<double>>()) {
                    BracketingResult br =
                        bracketing_check(dom, W, m, lam, j.at("mesh_h").get<double>());
                    csv += std::to_string(br.m_level) + "," + fmt(br.lambda) + "," +
                           std::to_string(br.sum_dirichlet) + "," +
                           std::to_string(br.global_count) + "," +
                           std::to_string(br.sum_neumann) + "," + std::to_string(br.cubes) +
                           "," + (br.sandwich_ok ? "1" : "0") + "\n";
                    all_ok = all_ok && br.sandwich_ok;
                }
            }
            write_file(artifact_path(j, command, "csv"), csv, out.artifacts);
            if (!all_ok) {
                out.exit_code = kExitNumerical;
                out.message = "bracketing sandwich violated";
            }
            return out;
        }
        if (command == "clr-check") {
            HolderSubgraphDomain dom = parse_domain(j.at("domain"));
            PotentialField V = parse_potential(j.at("potential"));
            const ExponentSet es = compute_exponents(2, j.at("gamma").get<double>(),
                                                     j.value("c", dom.c()));
            std::vector<double> lams = j.at("lambdas").get<std::vector<double>>();
            ClrCheck ck = clr_bound_check(dom, V, es, lams, j.at("mesh_h").get<double>(),
                                          quad_res);
            result["norm"] = ck.norm_v;
            result["divergent_norm"] = ck.divergent_norm;
            result["fitted_c"] = ck.fitted_c;
            result["slope"] = ck.slope;
            json rows = json::array();
            for (const auto& r : ck.rows)
                rows.push_back({{"lambda", r.lambda},
                                {"fem_count", r.fem_count},
                                {"delta0", r.delta0_scaled},
                                {"product", r.product}});
            result["rows"] = rows;
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            if (ck.divergent_norm) {
                out.exit_code = kExitNumerical;
                out.message = "combined norm diverges; the bound does not apply";
            }
            return out;
        }
        if (command == "certify-example") {
            ExampleConfig ec;
            ec.gamma = j.at("gamma").get<double>();
            ec.m = j.at("m").get<int>();
            ec.epsilon = j.at("epsilon").get<double>();
            ec.n_max = j.value("n_max", std::max(2, j.at("n").get<int>()));
            const int n = j.at("n").get<int>();
            CertReport rep = certify(ec, n, j.value("seed", 1));
            result["lambda"] = rep.lambda;
            result["lambda_log2"] = rep.lambda_log2;
            result["all_negative"] = rep.all_negative;
            result["count_lower_bound"] = rep.count_lower_bound;
            result["ratio"] = rep.ratio;
            result["ratio_log2"] = rep.ratio_log2;
            result["cells_evaluated"] = rep.cells_evaluated;
            result["classes"] = rep.classes;
            result["worst_total"] = rep.worst_total;
            result["symmetry_verified"] = rep.symmetry_verified;
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            std::string csv = "n,lambda,ratio\n";
            for (int nn = 0; nn <= n; ++nn) {
                csv += std::to_string(nn) + "," + fmt(lambda_schedule(ec, nn)) + "," +
                       fmt(std::exp2(ec.m * nn *
                                     (double(ec.d - 1) -
                                      ec.gamma * (double(ec.d - 1) + ec.epsilon)))) +
                       "\n";
            }
            write_file(artifact_path(j, command, "csv"), csv, out.artifacts);
            if (!rep.all_negative) {
                out.exit_code = kExitNumerical;
                out.message = "certificate voided: a quadratic form was nonnegative";
            }
            return out;
        }
        if (command == "poincare-scan") {
            const std::string mode = j.value("mode", std::string("poincare"));
            if (mode == "ps") {
                std::vector<double> ms = j.at("m_grid").get<std::vector<double>>();
                PSScan scan = ps_scaling_scan(j.value("delta", 0.5), ms,
                                              j.at("qstar").get<double>(),
                                              j.value("target_h", 0.015625),
                                              j.value("max_iter", 400), j.value("seed", 1));
                result["m_grid"] = scan.m_values;
                result["min_values"] = scan.min_values;
                result["slope"] = scan.slope;
            } else {
                std::vector<double> ds = j.at("delta_grid").get<std::vector<double>>();
                const HatKind kind = j.value("kind", std::string("tent")) == "square"
                                         ? HatKind::Square
                                         : HatKind::TentSpike;
                PoincareScan scan = poincare_scan(kind, ds, j.value("elems_across", 24));
                result["delta_grid"] = scan.delta;
                result["mu2"] = scan.mu2;
                result["slope"] = scan.slope;
                result["c_p"] = scan.c_p;
                if (scan.degenerate) {
                    result["degenerate"] = true;
                    write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
                    out.exit_code = kExitNumerical;
                    out.message = "fit degenerate: need at least 3 grid points";
                    return out;
                }
            }
            write_file(artifact_path(j, command, "json"), result.dump(2), out.artifacts);
            return out;
        }
        out.exit_code = kExitConfig;
        out.message = "config error at 'command': unknown command '" + command + "'";
        return out;
    } catch (const nlohmann::json::exception& e) {
        out.exit_code = kExitConfig;
        out.message = std::string("config error: ") + e.what();
        return out;
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitConfig;
        out.message = std::string("config error: ") + e.what();
        return out;
    } catch (const std::exception& e) {
        out.exit_code = kExitNumerical;
        out.message = std::string("numerical failure: ") + e.what();
        return out;
    }
}

}  // namespace holspec
