#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holspec/assemble.hpp"
#include "holspec/inertia.hpp"

namespace holspec {

struct CountResult {
    std::int64_t count = 0;  // eigenvalues of (K + lambda P, M) strictly below sigma
    Inertia inertia;
    double sigma_used = 0.0;
    bool perturbed = false;
};

// negative-count via matrix inertia; sigma is nudged when it lands on an
// eigenvalue (n_zero > 0)
CountResult count_below(const DiscreteOperator& op, double sigma, bool parallel = true);

// k smallest generalized eigenvalues by bisection on count_below
std::vector<double> lowest_eigenvalues(const DiscreteOperator& op, int k, double tol,
                                       bool parallel = true);

enum class HatKind { Square, TentSpike };

struct PoincareScan {
    std::vector<double> delta;
    std::vector<double> mu2;
    double slope = 0.0;  // Theil-Sen of ln mu2 vs ln delta (expect -2)
    double c_p = 0.0;    // inf mu2 * delta^2
    bool degenerate = false;
};

// second Neumann eigenvalue of hat domains across a delta grid
PoincareScan poincare_scan(HatKind kind, std::span<const double> delta_grid, int elems_across,
                           bool parallel = true);

struct PSEstimate {
    double min_value = 0.0;  // best found min of |grad u|^2 / |u|_{q*}^2, mean-zero u
    int iterations = 0;
    bool converged = false;
};

// projected-gradient upper-bound estimator for the Poincare-Sobolev constant
PSEstimate estimate_ps_constant(const HolderSubgraphDomain& dom, double qstar, double target_h,
                                int max_iter, std::uint64_t seed, bool parallel = true);

struct PSScan {
    std::vector<double> m_values;
    std::vector<double> min_values;
    double slope = 0.0;  // expect -(d-1)(1 - 2/qstar)
    bool degenerate = false;
};

// rectangles of width delta/M and height delta
PSScan ps_scaling_scan(double delta, std::span<const double> m_grid, double qstar,
                       double target_h, int max_iter, std::uint64_t seed, bool parallel = true);

}  // namespace holspec
