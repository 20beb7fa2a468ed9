#include <benchmark/benchmark.h>

#include "nlsdbar/dbar.hpp"
#include "nlsdbar/nls.hpp"
#include "nlsdbar/parametrix.hpp"
#include "nlsdbar/phase.hpp"
#include "nlsdbar/weber.hpp"

using namespace nlsdbar;

namespace {

const ScatteringData& data() {
    static const ScatteringData sd = ScatteringData::from_function(
        [](double z) { return 0.6 * std::exp(cplx(-z * z, z)); },
        [](double z) { return cplx(-2 * z, 1) * 0.6 * std::exp(cplx(-z * z, z)); }, -8, 8, 1025);
    return sd;
}

void BM_WeberU(benchmark::State& st) {
    const cplx a(0.5, 0.0457860);
    const double r = static_cast<double>(st.range(0));
    int k = 0;
    for (auto _ : st) {
        const cplx y = std::polar(r, -pi + 0.37 * (k++ % 17));
        benchmark::DoNotOptimize(weber::U(a, y));
    }
}
BENCHMARK(BM_WeberU)->Arg(1)->Arg(6)->Arg(20);

void BM_ParametrixP(benchmark::State& st) {
    const pc::Parametrix P(0.5);
    int k = 0;
    for (auto _ : st) {
        const cplx zeta = std::polar(0.5 + 0.1 * (k % 50), 0.13 * (k % 48));
        ++k;
        benchmark::DoNotOptimize(P.P(zeta));
    }
}
BENCHMARK(BM_ParametrixP);

void BM_FFunction(benchmark::State& st) {
    const phase::FFunction f(data(), 0.3);
    int k = 0;
    for (auto _ : st) {
        const cplx z(0.3 + 0.01 * (k % 100), 0.2 + 0.003 * (k % 7));
        ++k;
        benchmark::DoNotOptimize(f.f(z));
    }
}
BENCHMARK(BM_FFunction);

void BM_FFunctionSetup(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(phase::FFunction(data(), 0.3).c());
}
BENCHMARK(BM_FFunctionSetup)->Unit(benchmark::kMillisecond);

void BM_TransferMatrix(benchmark::State& st) {
    const Potential q = Potential::gaussian(0.8, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(transfer_matrix(q, 1.3));
}
BENCHMARK(BM_TransferMatrix)->Unit(benchmark::kMicrosecond);

void BM_SplitStep(benchmark::State& st) {
    const Potential q = Potential::gaussian(0.8, 1.0);
    evolution::SplitStepOptions so;
    so.n = static_cast<std::size_t>(st.range(0));
    so.half_width = 0.0625 * static_cast<double>(so.n);
    for (auto _ : st) benchmark::DoNotOptimize(evolution::split_step_nls(q, 0.5, 0.005, so).mass());
    st.SetItemsProcessed(st.iterations() * 100);  // steps
}
BENCHMARK(BM_SplitStep)->Arg(16384)->Arg(65536)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
