// Timing comparison between the serial reference kernels and the dispatched
// entry points (OpenMP sweeps when the build has it) on sizable box covers.

#include <chrono>
#include <iostream>
#include <random>

#include "meandim/widim.hpp"

using namespace meandim;
using clk = std::chrono::steady_clock;

namespace {

WeightedCube unit_cube(std::size_t dim) {
    WeightedCube c;
    c.weights.assign(dim, Rational(1));
    return c;
}

BoxCover random_cover(std::size_t dim, std::size_t boxes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coord(0, 8);
    BoxCover cover;
    for (std::size_t b = 0; b < boxes; ++b) {
        Box box;
        for (std::size_t i = 0; i < dim; ++i) {
            int a = coord(rng), c = coord(rng);
            if (a > c) std::swap(a, c);
            box.lo.push_back(Rational(a, 8));
            box.hi.push_back(Rational(c, 8));
        }
        cover.boxes.push_back(std::move(box));
    }
    return cover;
}

template <typename F>
double time_ms(F&& f, int reps) {
    auto t0 = clk::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count() / reps;
}

void bench_case(std::size_t dim, std::size_t boxes, int reps) {
    WeightedCube cube = unit_cube(dim);
    BoxCover cover = random_cover(dim, boxes, 1000 * dim + boxes);

    bool cs = false, cd = false;
    int os = 0, od = 0;
    double t_cov_s = time_ms([&] { cs = covers_serial(cover, cube); }, reps);
    double t_cov_d = time_ms([&] { cd = covers(cover, cube); }, reps);
    double t_ord_s = time_ms([&] { os = order_serial(cover); }, reps);
    double t_ord_d = time_ms([&] { od = order(cover); }, reps);
    if (cs != cd || os != od) {
        std::cerr << "MISMATCH dim=" << dim << " boxes=" << boxes << "\n";
        std::exit(1);
    }
    std::cout << "dim=" << dim << " boxes=" << boxes << "  covers: serial " << t_cov_s
              << " ms, dispatched " << t_cov_d << " ms (x" << (t_cov_d > 0 ? t_cov_s / t_cov_d : 0)
              << ")  order: serial " << t_ord_s << " ms, dispatched " << t_ord_d << " ms (x"
              << (t_ord_d > 0 ? t_ord_s / t_ord_d : 0) << ")\n";
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::cout << "OpenMP enabled\n";
#else
    std::cout << "OpenMP not available; dispatched == serial\n";
#endif
    bench_case(1, 400, 20);
    bench_case(2, 200, 5);
    bench_case(2, 600, 3);
    bench_case(3, 100, 3);
    bench_case(3, 250, 2);
    return 0;
}
