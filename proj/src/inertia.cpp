#include "holspec/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace holspec {

namespace {

// signs of a symmetric 2x2 block [[a,b],[b,c]]
Inertia classify_2x2(double a, double b, double c, double tol) {
    Inertia in;
    const double m = 0.5 * (a + c);
    const double disc = std::hypot(0.5 * (a - c), b);
    const double big = (m >= 0.0) ? m + disc : m - disc;
    double small;
    if (std::abs(big) > 0.0)
        small = (a * c - b * b) / big;  // det / big keeps the tiny eigenvalue accurate
    else
        small = 0.0;
    for (double e : {big, small}) {
        if (e > tol)
            in.n_plus++;
        else if (e < -tol)
            in.n_minus++;
        else
            in.n_zero++;
    }
    return in;
}

}  // namespace

DenseLDLT::DenseLDLT(std::vector<double> a, int n, double zero_tol_abs)
    : n_(n), a_(std::move(a)) {
    if (std::int64_t(a_.size()) != std::int64_t(n) * n)
        throw std::invalid_argument("DenseLDLT: size mismatch");
    reg_ = std::max(zero_tol_abs, 1e-300);
    factor(zero_tol_abs);
}

void DenseLDLT::factor(double tol) {
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    auto A = [&](int i, int j) -> double& { return a_[std::size_t(i) + std::size_t(j) * n_]; };
    auto sym_swap = [&](int i, int j) {
        if (i == j) return;
        for (int t = 0; t < n_; ++t) std::swap(A(i, t), A(j, t));
        for (int t = 0; t < n_; ++t) std::swap(A(t, i), A(t, j));
    };

    int k = 0;
    while (k < n_) {
        // largest off-diagonal magnitude in column k at or below the diagonal
        double lambda = 0.0;
        int r = k;
        for (int i = k + 1; i < n_; ++i) {
            const double v = std::abs(A(i, k));
            if (v > lambda) {
                lambda = v;
                r = i;
            }
        }
        const double absakk = std::abs(A(k, k));

        if (std::max(absakk, lambda) <= tol) {
            // negligible column: zero pivot, no elimination needed
            steps_.push_back({std::int32_t(k), std::int32_t(k), 1, 1});
            inertia_.n_zero++;
            ++k;
            continue;
        }

        int pivot_size = 1;
        int kp = k;
        if (absakk < alpha * lambda) {
            double sigma = 0.0;
            for (int i = k; i < n_; ++i)
                if (i != r) sigma = std::max(sigma, std::abs(A(i, r)));
            if (absakk * sigma >= alpha * lambda * lambda) {
                pivot_size = 1;
            } else if (std::abs(A(r, r)) >= alpha * sigma) {
                pivot_size = 1;
                kp = r;
            } else {
                pivot_size = 2;
                kp = r;
            }
        }

        if (pivot_size == 1) {
            sym_swap(k, kp);
            double d = A(k, k);
            std::int8_t zero = 0;
            if (d > tol)
                inertia_.n_plus++;
            else if (d < -tol)
                inertia_.n_minus++;
            else {
                inertia_.n_zero++;
                inertia_.degenerate = true;
                zero = 1;
                d = (d >= 0.0 ? reg_ : -reg_);  // regularize so the recursion can continue
                A(k, k) = d;
            }
            for (int i = k + 1; i < n_; ++i) A(i, k) /= d;
            for (int j = k + 1; j < n_; ++j) {
                const double ajk = A(j, k) * d;
                if (ajk == 0.0) continue;
                double* colj = &A(0, j);
                const double* colk = &A(0, k);
                for (int i = j; i < n_; ++i) colj[i] -= colk[i] * ajk;
            }
            // restore symmetry in the trailing block
            for (int j = k + 1; j < n_; ++j)
                for (int i = j + 1; i < n_; ++i) A(j, i) = A(i, j);
            steps_.push_back({std::int32_t(k), std::int32_t(kp), 1, zero});
            ++k;
        } else {
            sym_swap(k + 1, kp);
            const double e00 = A(k, k), e10 = A(k + 1, k), e11 = A(k + 1, k + 1);
            inertia_ += classify_2x2(e00, e10, e11, tol);
            double det = e00 * e11 - e10 * e10;
            std::int8_t zero = 0;
            if (std::abs(det) <= tol * tol) {
                inertia_.degenerate = true;
                zero = 1;
                det = (det >= 0.0 ? 1.0 : -1.0) * std::max(std::abs(det), reg_ * reg_);
            }
            const double i00 = e11 / det, i11 = e00 / det, i10 = -e10 / det;
            for (int i = k + 2; i < n_; ++i) {
                const double b0 = A(i, k), b1 = A(i, k + 1);
                A(i, k) = i00 * b0 + i10 * b1;
                A(i, k + 1) = i10 * b0 + i11 * b1;
            }
            for (int j = k + 2; j < n_; ++j) {
                const double w0 = A(j, k) * e00 + A(j, k + 1) * e10;
                const double w1 = A(j, k) * e10 + A(j, k + 1) * e11;
                if (w0 == 0.0 && w1 == 0.0) continue;
                double* colj = &A(0, j);
                const double* c0 = &A(0, k);
                const double* c1 = &A(0, k + 1);
                for (int i = j; i < n_; ++i) colj[i] -= c0[i] * w0 + c1[i] * w1;
            }
            for (int j = k + 2; j < n_; ++j)
                for (int i = j + 1; i < n_; ++i) A(j, i) = A(i, j);
            steps_.push_back({std::int32_t(k), std::int32_t(kp), 2, zero});
            k += 2;
        }
    }
}

void DenseLDLT::solve_one(double* b) const {
    auto A = [&](int i, int j) -> const double& {
        return a_[std::size_t(i) + std::size_t(j) * n_];
    };
    // forward: apply swaps and L^{-1}
    for (const Step& s : steps_) {
        const int k = s.k;
        if (s.size == 1) {
            if (s.swap_with != k) std::swap(b[k], b[s.swap_with]);
            const double bk = b[k];
            if (bk != 0.0)
                for (int i = k + 1; i < n_; ++i) b[i] -= A(i, k) * bk;
        } else {
            if (s.swap_with != k + 1) std::swap(b[k + 1], b[s.swap_with]);
            const double b0 = b[k], b1 = b[k + 1];
            for (int i = k + 2; i < n_; ++i) b[i] -= A(i, k) * b0 + A(i, k + 1) * b1;
        }
    }
    // diagonal solve
    for (const Step& s : steps_) {
        const int k = s.k;
        if (s.size == 1) {
            b[k] /= A(k, k);
        } else {
            const double e00 = A(k, k), e10 = A(k + 1, k), e11 = A(k + 1, k + 1);
            double det = e00 * e11 - e10 * e10;
            if (det == 0.0) det = reg_ * reg_;
            const double x0 = (e11 * b[k] - e10 * b[k + 1]) / det;
            const double x1 = (-e10 * b[k] + e00 * b[k + 1]) / det;
            b[k] = x0;
            b[k + 1] = x1;
        }
    }
    // backward: L^{-T} and the swaps in reverse
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        const Step& s = *it;
        const int k = s.k;
        if (s.size == 1) {
            double acc = 0.0;
            for (int i = k + 1; i < n_; ++i) acc += A(i, k) * b[i];
            b[k] -= acc;
            if (s.swap_with != k) std::swap(b[k], b[s.swap_with]);
        } else {
            double a0 = 0.0, a1 = 0.0;
            for (int i = k + 2; i < n_; ++i) {
                a0 += A(i, k) * b[i];
                a1 += A(i, k + 1) * b[i];
            }
            b[k] -= a0;
            b[k + 1] -= a1;
            if (s.swap_with != k + 1) std::swap(b[k + 1], b[s.swap_with]);
        }
    }
}

void DenseLDLT::solve(double* b, int nrhs, bool parallel) const {
    if (parallel && nrhs > 1) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < nrhs; ++j) solve_one(b + std::size_t(j) * n_);
    } else {
        for (int j = 0; j < nrhs; ++j) solve_one(b + std::size_t(j) * n_);
    }
}

Inertia dense_inertia(std::vector<double> a, int n, double tol_rel) {
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    DenseLDLT f(std::move(a), n, tol_rel * amax);
    return f.inertia();
}

Inertia block_tridiag_inertia(const DiscreteOperator& op, std::span<const double> vals,
                              double tol_abs, bool parallel) {
    const auto& lo = op.line_offsets;
    const std::size_t nb = lo.size() - 1;
    Inertia total;
    std::vector<double> schur;  // dense update carried into the next block
    int schur_n = 0;

    for (std::size_t bi = 0; bi < nb; ++bi) {
        const std::int32_t r0 = lo[bi], r1 = lo[bi + 1];
        const int ni = r1 - r0;
        const std::int32_t nxt0 = (bi + 1 < nb) ? lo[bi + 1] : 0;
        const std::int32_t nxt1 = (bi + 1 < nb) ? lo[bi + 2] : 0;
        const int nn = nxt1 - nxt0;

        // diagonal block minus the Schur carry-over
        std::vector<double> S(std::size_t(ni) * ni, 0.0);
        for (std::int32_t i = r0; i < r1; ++i) {
            for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k) {
                const std::int32_t j = op.col[std::size_t(k)];
                if (j >= r0 && j < r1)
                    S[std::size_t(i - r0) + std::size_t(j - r0) * ni] = vals[std::size_t(k)];
            }
        }
        if (schur_n == ni && !schur.empty())
            for (std::size_t q = 0; q < S.size(); ++q) S[q] -= schur[q];
        else if (!schur.empty())
            throw std::logic_error("block_tridiag_inertia: block size mismatch");

        DenseLDLT fac(std::move(S), ni, tol_abs);
        total += fac.inertia();

        if (bi + 1 == nb) break;

        // coupling rows C (next block x this block) as triplets sorted by row
        struct Trip {
            std::int32_t r, c;
            double v;
        };
        std::vector<Trip> trips;
        for (std::int32_t i = nxt0; i < nxt1; ++i)
            for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k) {
                const std::int32_t j = op.col[std::size_t(k)];
                if (j >= r0 && j < r1) trips.push_back({i - nxt0, j - r0, vals[std::size_t(k)]});
            }

        // X = S^{-1} C^T, one solve per next-block column
        std::vector<double> X(std::size_t(ni) * nn, 0.0);
        for (const Trip& t : trips) X[std::size_t(t.c) + std::size_t(t.r) * ni] = t.v;
        fac.solve(X.data(), nn, parallel);

        // new Schur carry: U = C X (nn x nn), accumulated row by row
        std::vector<double> U(std::size_t(nn) * nn, 0.0);
        std::vector<std::size_t> row_begin(std::size_t(nn) + 1, 0);
        std::sort(trips.begin(), trips.end(), [](const Trip& a, const Trip& b) {
            return a.r != b.r ? a.r < b.r : a.c < b.c;
        });
        for (const Trip& t : trips) row_begin[std::size_t(t.r) + 1]++;
        for (std::size_t q = 0; q < std::size_t(nn); ++q) row_begin[q + 1] += row_begin[q];
#pragma omp parallel for schedule(static) if (parallel)
        for (std::int64_t rr = 0; rr < nn; ++rr) {
            for (std::size_t ti = row_begin[std::size_t(rr)]; ti < row_begin[std::size_t(rr) + 1];
                 ++ti) {
                const Trip& t = trips[ti];
                const double* xcol = &X[std::size_t(t.c)];
                for (int j = 0; j < nn; ++j)
                    U[std::size_t(rr) + std::size_t(j) * nn] +=
                        t.v * xcol[std::size_t(j) * ni];
            }
        }
        // symmetrize against roundoff
        for (int i = 0; i < nn; ++i)
            for (int j = i + 1; j < nn; ++j) {
                const double m = 0.5 * (U[std::size_t(i) + std::size_t(j) * nn] +
                                        U[std::size_t(j) + std::size_t(i) * nn]);
                U[std::size_t(i) + std::size_t(j) * nn] = m;
                U[std::size_t(j) + std::size_t(i) * nn] = m;
            }
        schur = std::move(U);
        schur_n = nn;
    }
    return total;
}

Inertia operator_inertia(const DiscreteOperator& op, double sigma, bool parallel, double tol_rel) {
    const std::vector<double> vals = op.shifted_values(sigma);
    double amax = 0.0;
    for (double v : vals) amax = std::max(amax, std::abs(v));
    const double tol_abs = tol_rel * std::max(amax, 1e-300);

    const bool has_blocks = op.line_offsets.size() >= 3 &&
                            op.line_offsets.front() == 0 &&
                            op.line_offsets.back() == std::int32_t(op.n);
    if (has_blocks && op.n > 400) return block_tridiag_inertia(op, vals, tol_abs, parallel);

    // small problems: one dense factorization
    std::vector<double> full(std::size_t(op.n) * std::size_t(op.n), 0.0);
    for (std::int64_t i = 0; i < op.n; ++i)
        for (std::int64_t k = op.ptr[std::size_t(i)]; k < op.ptr[std::size_t(i) + 1]; ++k)
            full[std::size_t(i) + std::size_t(op.col[std::size_t(k)]) * std::size_t(op.n)] =
                vals[std::size_t(k)];
    DenseLDLT f(std::move(full), int(op.n), tol_abs);
    return f.inertia();
}

}  // namespace holspec
