#include <benchmark/benchmark.h>

#include <omp.h>

#include "gpslab/parallel.hpp"
#include "gpslab/partition.hpp"
#include "gpslab/replica.hpp"

using namespace gpslab;

namespace {

LogWeights instance(int n) {
    Philox rng(99);
    const auto sl = StrandLaw::gaussian();
    return quenched_weights(sample_strands(sl, {n, n}, rng), sl, 0.4, 0.05);
}

const RenewalLaw& law() {
    static const RenewalLaw l(0.75);
    return l;
}

void BM_naive(benchmark::State& st) {
    const auto w = instance(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(reference::naive_partition(law(), w, Mode::constrained).log_value);
}

// threads = 0 means every available core
void run_dp(benchmark::State& st, int threads) {
    set_workers(threads);
    const auto w = instance(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(partition_from_weights(law(), w, Mode::constrained).log_value);
    st.counters["threads"] = workers();
    set_workers(0);
}
void BM_dp_serial(benchmark::State& st) { run_dp(st, 1); }
void BM_dp_openmp(benchmark::State& st) { run_dp(st, 0); }

void run_pairs(benchmark::State& st, int threads) {
    set_workers(threads);
    const auto r = StrandLaw::rademacher();
    for (auto _ : st) benchmark::DoNotOptimize(replica_samples(law(), r, 0.1, {64, 64}, st.range(0), 1).size());
    st.counters["threads"] = workers();
    set_workers(0);
}
void BM_pairs_serial(benchmark::State& st) { run_pairs(st, 1); }
void BM_pairs_openmp(benchmark::State& st) { run_pairs(st, 0); }

}  // namespace

BENCHMARK(BM_naive)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dp_serial)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dp_openmp)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairs_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairs_openmp)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
