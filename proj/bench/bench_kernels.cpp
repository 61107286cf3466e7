// Timings of the OpenMP kernels against their serial reference paths:
// element assembly, block-tridiagonal inertia, certificate cells, column
// quadrature.  Run with OMP_NUM_THREADS to choose the parallel width.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "holspec/assemble.hpp"
#include "holspec/counterexample.hpp"
#include "holspec/inertia.hpp"
#include "holspec/norms.hpp"
#include "holspec/spectral.hpp"

using namespace holspec;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timeit(F&& f) {
    const auto t0 = clk::now();
    f();
    return seconds(t0, clk::now());
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    // assembly on a fine unit square with a boundary-singular potential
    {
        HolderSubgraphDomain dom = build_flat_domain(1.0);
        Mesh mesh = triangulate(dom, 1.0 / 256);
        PotentialField V = PotentialField::h_power(1.0, -0.5);
        DiscreteOperator op_serial, op_par;
        const double ts = timeit([&] { op_serial = assemble(mesh, dom, V, 1.0, BC::Neumann, false); });
        const double tp = timeit([&] { op_par = assemble(mesh, dom, V, 1.0, BC::Neumann, true); });
        bool identical = op_serial.kval == op_par.kval && op_serial.pval == op_par.pval &&
                         op_serial.mval == op_par.mval;
        std::printf("assembly (%lld vertices): serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%d\n",
                    (long long)mesh.n_vertices(), ts, tp, ts / tp, int(identical));

        const std::vector<double> vals = op_par.shifted_values(50.0);
        double amax = 0.0;
        for (double v : vals) amax = std::max(amax, std::abs(v));
        Inertia is, ip;
        const double fs = timeit([&] { is = block_tridiag_inertia(op_par, vals, 1e-12 * amax, false); });
        const double fp = timeit([&] { ip = block_tridiag_inertia(op_par, vals, 1e-12 * amax, true); });
        std::printf("block LDLT inertia:       serial %.3fs  parallel %.3fs  speedup %.2fx  same=(%lld,%lld)\n",
                    fs, fp, fs / fp, (long long)is.n_minus, (long long)ip.n_minus);
    }

    // certificate cells
    {
        ExampleConfig cfg;
        cfg.gamma = 0.6;
        cfg.m = 10;
        cfg.n_max = 1;
        cfg.epsilon = 0.3;
        CertReport rs, rp;
        const double ts = timeit([&] { rs = certify(cfg, 1, 1, 10000, false); });
        const double tp = timeit([&] { rp = certify(cfg, 1, 1, 10000, true); });
        std::printf("certificate (1024 cells): serial %.3fs  parallel %.3fs  speedup %.2fx  agree=%d\n",
                    ts, tp, ts / tp, int(rs.worst_total == rp.worst_total));
    }

    // column quadrature (Orlicz modular over a fractal chart)
    {
        FractalParams fp{0.6, 10, 1, 2};
        HolderSubgraphDomain dom = build_fractal_domain(fp, false);
        PotentialField V = PotentialField::h_power(10.0, -0.7);
        const Rect r = chart_rect(dom);
        double a = 0, b = 0;
        const double t1 = timeit([&] { a = orlicz_modular_region(V, dom, r, 1.0, default_young(), 2); });
        omp_set_num_threads(1);
        const double t0 = timeit([&] { b = orlicz_modular_region(V, dom, r, 1.0, default_young(), 2); });
        std::printf("column quadrature:        serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%d\n",
                    t0, t1, t0 / t1, int(a == b));
    }
    return 0;
}
