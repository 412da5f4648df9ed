#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "ddecay/floquet/inversion.hpp"
#include "ddecay/parallel.hpp"
#include "ddecay/timedomain/volterra.hpp"

using namespace dd;

namespace {

SynthesisInput make_synthesis(int nodes, int N) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SynthesisInput in;
    in.omega = 1.25;
    for (int k = 0; k < nodes; ++k) {
        in.y.push_back(1.25 * (k + 0.5) / nodes);
        in.w.push_back(1.0 / nodes);
        std::vector<cplx> h(2 * N + 1);
        for (int n = -N; n <= N; ++n) h[n + N] = cplx(u(rng), u(rng)) / (1.0 + std::abs(n));
        in.h.push_back(std::move(h));
    }
    return in;
}

std::vector<double> times(int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = 0.5 * i;
    return t;
}

void BM_synthesis_serial(benchmark::State& st) {
    const auto in = make_synthesis(static_cast<int>(st.range(0)), 40);
    const auto t = times(1000);
    for (auto _ : st) benchmark::DoNotOptimize(synthesize_serial(in, t));
}
void BM_synthesis_parallel(benchmark::State& st) {
    const auto in = make_synthesis(static_cast<int>(st.range(0)), 40);
    const auto t = times(1000);
    for (auto _ : st) benchmark::DoNotOptimize(synthesize_parallel(in, t));
}
BENCHMARK(BM_synthesis_serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesis_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_history_serial(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    std::vector<cplx> kern(2 * n, cplx(0.3, -0.1)), phi(2 * n, cplx(0.2, 0.5)), out(n);
    for (auto _ : st) {
        std::fill(out.begin(), out.end(), 0.0);
        history_serial(kern, phi, 0, n, n, 2 * n, out);
        benchmark::DoNotOptimize(out.data());
    }
}
void BM_history_parallel(benchmark::State& st) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    std::vector<cplx> kern(2 * n, cplx(0.3, -0.1)), phi(2 * n, cplx(0.2, 0.5)), out(n);
    for (auto _ : st) {
        std::fill(out.begin(), out.end(), 0.0);
        history_parallel(kern, phi, 0, n, n, 2 * n, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_history_serial)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_history_parallel)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

// end to end: a t = 100 Volterra run at r = 1 and a Laplace trace
void BM_volterra(benchmark::State& st) {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
    VolterraOptions vo;
    vo.parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(solve_volterra(cfg, 100.0, 0.025, vo));
}
BENCHMARK(BM_volterra)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_laplace(benchmark::State& st) {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
    InversionOptions io;
    io.parallel = st.range(0) != 0;
    const auto t = times(101);
    for (auto _ : st) benchmark::DoNotOptimize(invert_survival(cfg, t, io));
}
BENCHMARK(BM_laplace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
