#include "cnlkit/minmodel.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <set>
#include <string>

namespace {

// n atoms over predicates p (minimized), z (varied) and f (fixed), 3-literal clauses.
cnl::circ::GroundTheory random_theory(int n, unsigned seed) {
    std::mt19937 rng(seed);
    const char* preds[] = {"p", "z", "f"};
    auto name = [&](int i) { return std::string(preds[i % 3]) + "(" + std::to_string(i) + ")"; };
    std::string text;
    for (int i = 0; i < n; ++i) text += "#atom " + name(i) + ".\n";
    for (int c = 0; c < n; ++c) {
        for (int j = 0; j < 3; ++j)
            text += (j ? " | " : "") + std::string(rng() % 2 ? "-" : "") + name(static_cast<int>(rng() % n));
        text += ".\n";
    }
    text += "#minimize p.\n#vary z.\n";
    return cnl::circ::parse_theory(text);
}

void BM_reference(benchmark::State& st) {
    auto t = random_theory(static_cast<int>(st.range(0)), 1);
    for (auto _ : st) benchmark::DoNotOptimize(cnl::circ::minimal_models_reference(t));
}

void BM_kernel(benchmark::State& st) {
    auto t = random_theory(static_cast<int>(st.range(0)), 1);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(cnl::circ::minimal_models(t));
    omp_set_num_threads(saved);
}

void kernel_args(benchmark::internal::Benchmark* b) {
    for (int n : {12, 16, 20, 22})
        for (int threads : std::set<int>{1, omp_get_num_procs()}) b->Args({n, threads});
}

} // namespace

BENCHMARK(BM_reference)->Arg(8)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel)->Apply(kernel_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
