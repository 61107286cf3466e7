#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holspec/assemble.hpp"

namespace holspec {

struct Inertia {
    std::int64_t n_minus = 0;
    std::int64_t n_zero = 0;
    std::int64_t n_plus = 0;
    bool degenerate = false;  // a zero pivot had to be regularized mid-factorization

    Inertia& operator+=(const Inertia& o) {
        n_minus += o.n_minus;
        n_zero += o.n_zero;
        n_plus += o.n_plus;
        degenerate = degenerate || o.degenerate;
        return *this;
    }
};

// Dense symmetric-indefinite LDL^T with Bunch-Kaufman partial pivoting
// (1x1 and 2x2 pivots).  Full storage; pivot signs give the inertia by
// Sylvester's law.
class DenseLDLT {
public:
    // a: full column-major n x n symmetric matrix (consumed)
    DenseLDLT(std::vector<double> a, int n, double zero_tol_abs);

    const Inertia& inertia() const { return inertia_; }
    int n() const { return n_; }

    // solve A x = b for nrhs columns stored column-major in b (ld = n)
    void solve(double* b, int nrhs, bool parallel = false) const;

private:
    int n_;
    std::vector<double> a_;
    struct Step {
        std::int32_t k;
        std::int32_t swap_with;  // row/col exchanged before elimination
        std::int8_t size;        // 1 or 2
        std::int8_t zero;        // pivot treated as zero (regularized)
    };
    std::vector<Step> steps_;
    Inertia inertia_;
    double reg_;  // regularization magnitude used for zero pivots

    void factor(double zero_tol);
    void solve_one(double* b) const;
};

// inertia of a dense symmetric matrix (full storage, column-major);
// tolerance is relative to max |A_ij|
Inertia dense_inertia(std::vector<double> a, int n, double tol_rel = 1e-12);

// inertia of K + lambda P - sigma M using the mesh line blocks when present
Inertia operator_inertia(const DiscreteOperator& op, double sigma, bool parallel = true,
                         double tol_rel = 1e-12);

// exposed for the serial-vs-parallel benchmark and tests
Inertia block_tridiag_inertia(const DiscreteOperator& op, std::span<const double> vals,
                              double tol_abs, bool parallel);

}  // namespace holspec
