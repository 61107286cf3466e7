#pragma once

#include <cstdint>
#include <utility>

#include "holspec/domain.hpp"
#include "holspec/potential.hpp"

namespace holspec {

struct ExampleConfig {
    double gamma = 0.6;  // in ((d-1)/d, 1)
    int m = 10;
    int n_max = 2;
    double epsilon = 0.3;  // in (0, (d-1)(1/gamma - 1)]; equality kills the blow-up
    int d = 2;
};

struct ExampleConstants {
    double b2 = 0.0;      // 2^{-(d-1)} * int_0^{1/8} sin^2
    double bnabla = 0.0;  // int_0^1 cos^2
    double bV = 0.0;      // 2 bnabla / b2
};

ExampleConstants example_constants(int d);

// fractal domain with base box plus the boundary-singular potential
std::pair<HolderSubgraphDomain, PotentialField> build_example(const ExampleConfig& cfg);

struct EpsilonInfo {
    double eps_max = 0.0;      // (d-1)(1/gamma - 1)
    bool lp_ok_at_max = false;  // integrability margin holds at eps_max
    double f_at_d = 0.0;       // cubic at mu = d, analytically -1
    double f_grid_max = 0.0;   // max of the cubic over the interior mu grid
    bool f_below_minus1 = false;
};

EpsilonInfo epsilon_admissible(int d, double gamma, int grid = 10000);

struct RayleighForm {
    double grad_term = 0.0;
    double pot_term = 0.0;
    double total = 0.0;
    double l2 = 0.0;
    bool bounds_ok = false;  // stated lower/upper bounds on l2 and grad
};

// quadratic form of the localized test mode on cell (n, k)
RayleighForm rayleigh_form(const ExampleConfig& cfg, int n, std::int64_t k, double lambda);

double lambda_schedule_log2(const ExampleConfig& cfg, int n);
double lambda_schedule(const ExampleConfig& cfg, int n);

struct CertReport {
    double lambda = 0.0;
    double lambda_log2 = 0.0;
    bool all_negative = false;
    std::int64_t count_lower_bound = 0;  // 2^{(d-1) m n}
    double ratio = 0.0;                  // lambda^{-d/2} * count
    double ratio_log2 = 0.0;             // exact exponent arithmetic
    std::int64_t cells_evaluated = 0;
    std::int64_t classes = 0;
    double worst_total = 0.0;
    std::int64_t offending_k = -1;
    bool used_classes = false;
    bool symmetry_verified = true;
    double max_symmetry_rel_diff = 0.0;
};

CertReport certify(const ExampleConfig& cfg, int n, std::uint64_t seed = 1,
                   std::int64_t class_budget = 10000, bool parallel = true);

}  // namespace holspec
