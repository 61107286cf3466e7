#include "holspec/exponents.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace holspec {

ExponentSet compute_exponents(int d, double gamma, double c) {
    if (d < 2) throw std::invalid_argument("compute_exponents: d must be >= 2");
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::invalid_argument("compute_exponents: gamma must be in (0,1]");
    if (!(c > 0.0)) throw std::invalid_argument("compute_exponents: c must be > 0");

    ExponentSet es;
    es.d = d;
    es.gamma = gamma;
    es.c = c;

    const double dg = double(d - 1) / gamma;  // (d-1)/gamma
    const double mu = dg + 1.0;
    es.mu = mu;

    const double bracket = mu * mu / double(d) - double(d);  // (1/d)mu^2 - d
    es.beta = mu * bracket / double(d + 1);
    es.ptilde = mu * mu / (2.0 * double(d));
    es.qstar = 1.0 / (0.5 - 1.0 / mu);
    es.pstar = mu / 2.0;  // 1/pstar = 2/mu
    const double inv_rtilde = 1.0 / es.pstar - 1.0 / es.ptilde;
    es.rtilde = (inv_rtilde > 0.0) ? 1.0 / inv_rtilde : std::numeric_limits<double>::infinity();

    const double denom = mu * mu / double(d) + 1.0;
    const double inv_sprime = bracket / denom;
    const double inv_s = double(d + 1) / denom;
    es.sprime = 1.0 / inv_sprime;
    es.s = 1.0 / inv_s;
    es.omega = mu * inv_sprime;
    es.zeta = inv_s * (-es.beta + dg);

    es.c1 = 16.0;
    const double branch = std::min({1.0 / es.c1,
                                    std::pow(2.0, gamma) / (64.0 * c),
                                    1.0 / (std::pow(2.0, gamma + 3.0) * c)});
    es.c0 = std::pow(branch, 1.0 / gamma);
    es.c2 = es.c0 * std::pow(es.c1, 1.0 / gamma);
    return es;
}

double delta0(double norm_value, double h_omega, int d) {
    if (norm_value < 0.0) throw std::invalid_argument("delta0: norm_value must be >= 0");
    if (!(h_omega > 0.0) || h_omega >= 1.0)
        throw std::invalid_argument("delta0: h_omega must be in (0,1)");
    const double geometric = h_omega / std::sqrt(double(d));
    if (norm_value == 0.0) return geometric;  // 0^{-1/2} = +inf convention
    return std::min(geometric, 1.0 / std::sqrt(norm_value));
}

IdentityReport verify_exponent_identities(const ExponentSet& es, double tol) {
    IdentityReport rep;
    rep.tol = tol;
    const double dg = double(es.d - 1) / es.gamma;
    rep.r_conjugate = std::abs(1.0 / es.s + 1.0 / es.sprime - 1.0);
    rep.r_omega_sprime = std::abs(es.omega * es.sprime - (1.0 + dg));
    rep.r_omega_s = std::abs(es.omega * es.s - es.beta);
    rep.r_counting = std::abs(-2.0 * es.ptilde / es.s + 1.0 / es.sprime + double(es.d));
    rep.zeta_margin = es.zeta * es.sprime + dg - 1.0;
    rep.r_c2 = std::abs(es.c2 - es.c0 * std::pow(es.c1, 1.0 / es.gamma));
    rep.ok = rep.r_conjugate < tol && rep.r_omega_sprime < tol && rep.r_omega_s < tol &&
             rep.r_counting < tol && rep.zeta_margin > 0.0 && rep.r_c2 < tol;
    return rep;
}

std::string to_json(const ExponentSet& es, const IdentityReport& rep) {
    nlohmann::json j;
    j["d"] = es.d;
    j["gamma"] = es.gamma;
    j["c"] = es.c;
    j["mu"] = es.mu;
    j["beta"] = es.beta;
    j["ptilde"] = es.ptilde;
    j["qstar"] = es.qstar;
    j["pstar"] = es.pstar;
    j["rtilde"] = es.rtilde;
    j["s"] = es.s;
    j["sprime"] = es.sprime;
    j["omega"] = es.omega;
    j["zeta"] = es.zeta;
    j["c0"] = es.c0;
    j["c1"] = es.c1;
    j["c2"] = es.c2;
    j["residuals"] = {{"conjugate", rep.r_conjugate},
                      {"omega_sprime", rep.r_omega_sprime},
                      {"omega_s", rep.r_omega_s},
                      {"counting", rep.r_counting},
                      {"zeta_margin", rep.zeta_margin},
                      {"c2", rep.r_c2},
                      {"ok", rep.ok}};
    return j.dump(2);
}

}  // namespace holspec
