// Times the parallel sweep kernel against the serial reference on one grid
// and verifies the two produce bit-identical results.
//
//   bench_sweep [samples-per-axis] [eta]     (defaults: 2000, 12)

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nlcavity/analysis.hpp"

using namespace nlcavity;

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 2000;
    const double eta = argc > 2 ? std::atof(argv[2]) : 12.0;
    if (n < 2) {
        std::fprintf(stderr, "usage: bench_sweep [samples-per-axis >= 2] [eta]\n");
        return 1;
    }

    SweepSpec spec = default_sweep_spec(eta);
    spec.pump_range.count = n;
    spec.k_range.count = n;

    // fault in code pages and spin up the thread pool before timing
    SweepSpec warmup = spec;
    warmup.pump_range.count = 50;
    warmup.k_range.count = 50;
    (void)sweep_serial(warmup);
    (void)sweep(warmup);

    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult serial = sweep_serial(spec);
    const auto t1 = std::chrono::steady_clock::now();
    const SweepResult parallel = sweep(spec);
    const auto t2 = std::chrono::steady_clock::now();

    const double serial_s = std::chrono::duration<double>(t1 - t0).count();
    const double parallel_s = std::chrono::duration<double>(t2 - t1).count();
    const double points = static_cast<double>(n) * n;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("grid: %d x %d, eta = %g\n", n, n, eta);
    std::printf("serial:   %8.3f s  (%6.1f Mpoints/s)\n", serial_s,
                points / serial_s / 1e6);
    std::printf("parallel: %8.3f s  (%6.1f Mpoints/s)\n", parallel_s,
                points / parallel_s / 1e6);
    std::printf("speedup:  %.2fx\n", serial_s / parallel_s);

    const double diff = (serial.grid - parallel.grid).cwiseAbs().maxCoeff();
    std::printf("max |serial - parallel| = %g\n", diff);
    if (diff != 0.0) {
        std::fprintf(stderr, "kernels disagree; the grids must be bit-identical\n");
        return 1;
    }
    if (serial.max_value != parallel.max_value ||
        serial.argmax_pi != parallel.argmax_pi ||
        serial.argmax_k != parallel.argmax_k) {
        std::fprintf(stderr, "kernels disagree on the maximum\n");
        return 1;
    }
    return 0;
}
