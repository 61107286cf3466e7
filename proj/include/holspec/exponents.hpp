#pragma once

#include <array>
#include <string>

namespace holspec {

// Every exponent and constant derived from (d, gamma, c).  All closed-form;
// the identity residuals below are the self-check.
struct ExponentSet {
    int d = 2;
    double gamma = 1.0;
    double c = 1.0;       // Hoelder constant of the boundary function
    double mu = 0.0;      // (d-1)/gamma + 1
    double beta = 0.0;    // weight exponent of the boundary seminorm
    double ptilde = 0.0;  // integrability exponent of the boundary seminorm
    double qstar = 0.0;   // Poincare-Sobolev target exponent, > 2
    double pstar = 0.0;   // dual exponent, 1/pstar = 1 - 2/qstar
    double rtilde = 0.0;  // Hoelder gap, 1/rtilde = 1/pstar - 1/ptilde
    double s = 0.0;
    double sprime = 0.0;  // conjugate: 1/s + 1/sprime = 1
    double omega = 0.0;
    double zeta = 0.0;
    double c0 = 0.0;
    double c1 = 16.0;
    double c2 = 0.0;      // c0 * c1^(1/gamma)
};

struct IdentityReport {
    // residuals of the four algebraic identities tying s, s', omega, zeta,
    // beta and ptilde together
    double r_conjugate = 0.0;      // |1/s + 1/s' - 1|
    double r_omega_sprime = 0.0;   // |omega*s' - (1 + (d-1)/gamma)|
    double r_omega_s = 0.0;        // |omega*s - beta|
    double r_counting = 0.0;       // |-2*ptilde/s + 1/s' + d|
    double zeta_margin = 0.0;      // zeta*s' + (d-1)/gamma - 1, must be > 0
    double r_c2 = 0.0;             // |c2 - c0*c1^(1/gamma)|
    bool ok = false;               // all residuals < tol and margin > 0
    double tol = 1e-10;
};

ExponentSet compute_exponents(int d, double gamma, double c);

// Global length scale of the main counting bound:
// min(h_omega/sqrt(d), norm^{-1/2}); norm 0 means a vacuous potential and the
// geometric branch wins.
double delta0(double norm_value, double h_omega, int d);

IdentityReport verify_exponent_identities(const ExponentSet& es, double tol = 1e-10);

std::string to_json(const ExponentSet& es, const IdentityReport& rep);

}  // namespace holspec
