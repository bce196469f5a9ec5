#include <benchmark/benchmark.h>

#include <random>

#include "fcalc/chain.hpp"
#include "fcalc/morse.hpp"
#include "fcalc/smith.hpp"

using namespace fcalc;

static SparseMat random_matrix(std::mt19937_64& rng, long r, long c, int spread) {
    SparseMat m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j)
            if (rng() % 3) m.set(i, j, (long)(rng() % (2 * spread + 1)) - spread);
    return m;
}

static void BM_SmithNormalForm(benchmark::State& state) {
    std::mt19937_64 rng(42);
    long n = state.range(0);
    SparseMat a = random_matrix(rng, n, n, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(smith_normal_form(a, true));
    }
}
BENCHMARK(BM_SmithNormalForm)->Arg(8)->Arg(16)->Arg(32);

static void BM_Homology(benchmark::State& state) {
    std::mt19937_64 rng(7);
    ChainComplex c = random_complex(RingSpec::Z(), rng, 0, (int)state.range(0), 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(homology(c));
    }
}
BENCHMARK(BM_Homology)->Arg(3)->Arg(5);

static void BM_MorseReduce(benchmark::State& state) {
    std::mt19937_64 rng(7);
    ChainComplex a = random_complex(RingSpec::Z(), rng, 0, 3, 10);
    ChainComplex b = random_complex(RingSpec::Z(), rng, 0, 3, 10);
    ChainComplex t = tensor(a, b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(morse_reduce(t));
    }
}
BENCHMARK(BM_MorseReduce);
