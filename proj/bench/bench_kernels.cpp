// Serial reference vs OpenMP kernels on the S_{4,2} workload.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mgs/lp.hpp"
#include "mgs/witness.hpp"

using namespace mgs;

namespace {

double seconds(const std::function<void()>& f, int reps) {
    f();  // warm-up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void report(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, agree ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::stoi(argv[1]) : 3;
    std::printf("threads: %d, repetitions: %d\n", omp_get_max_threads(), reps);

    const Scenario s = Scenario::uniform(4, 2, 2);
    const auto part = Partition::parse("0,1|2,3", 4);
    const auto group = group_deterministic_vertices(Scenario::uniform(2, 2, 2));
    const std::vector<const VertexSet*> blocks = {&group, &group};
    std::vector<Vertex> a, b;
    const double ps = seconds([&] { a = kernels::partition_products_serial(s, part, blocks, 0); }, reps);
    const double pp = seconds([&] { b = kernels::partition_products_parallel(s, part, blocks, 0); }, reps);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].same_point(b[i]);
    report("partition products", ps, pp, same);

    const auto v = producible_vertices(s, Resource::S, 2);
    std::printf("S_{4,2}: %zu vertices\n", v.size());
    std::mt19937_64 rng(1);
    std::vector<Rational> coef(s.table_size());
    for (auto& c : coef) c = std::uniform_int_distribution<int>(-9, 9)(rng);
    const auto form = kernels::integer_form(BellExpression(s, coef, Rational(0), Resource::S, 2));
    std::size_t i1 = 0, i2 = 0;
    const double as = seconds([&] { i1 = kernels::argmax_serial(form, v); }, reps);
    const double ap = seconds([&] { i2 = kernels::argmax_parallel(form, v); }, reps);
    report("argmax over vertices", as, ap, i1 == i2);

    const auto cols = lp::ColumnMatrix::from_vertices(v);
    std::vector<double> y(cols.rows), d1(cols.cols), d2(cols.cols);
    for (auto& x : y) x = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double rs = seconds([&] { lp::kernels::reduced_costs_serial(cols, y, d1); }, reps);
    const double rp = seconds([&] { lp::kernels::reduced_costs_parallel(cols, y, d2); }, reps);
    report("reduced costs", rs, rp, d1 == d2);

    // Duals with no improving column force a full scan.
    std::vector<mpz_class> yz(cols.rows, mpz_class(-1));
    std::size_t f1 = 0, f2 = 0;
    const double fs = seconds([&] { f1 = lp::kernels::first_improving_serial(cols, yz); }, reps);
    const double fp = seconds([&] { f2 = lp::kernels::first_improving_parallel(cols, yz); }, reps);
    report("exact pricing scan", fs, fp, f1 == f2);
    return 0;
}
