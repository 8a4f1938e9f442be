// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include "eqlearn/staged.hpp"
#include "eqlearn/verify.hpp"

#include <benchmark/benchmark.h>

using namespace eqlearn;

namespace {

const ConceptClass& learner_class()
{
    static const ConceptClass cls = random_corpus(3, 1, 6, 24, 24)[0];
    return cls;
}

void BM_MonteCarloSerial(benchmark::State& state)
{
    const auto& cls = learner_class();
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo_trials_serial(cls, cls.concept_at(0), state.range(0), 1));
}

void BM_MonteCarloParallel(benchmark::State& state)
{
    const auto& cls = learner_class();
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo_trials(cls, cls.concept_at(0), state.range(0), 1));
}

void BM_StagedSerial(benchmark::State& state)
{
    IntervalFamily family(Rational(1, 2));
    for (auto _ : state)
        benchmark::DoNotOptimize(staged_trials_serial(family, state.range(0), 1));
}

void BM_StagedParallel(benchmark::State& state)
{
    IntervalFamily family(Rational(1, 2));
    for (auto _ : state)
        benchmark::DoNotOptimize(staged_trials(family, state.range(0), 1));
}

const ConceptClass& certify_class()
{
    static const ConceptClass cls = random_corpus(5, 1, 10, 40, 40)[0];
    return cls;
}

void BM_CertifySerial(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(certify_scheme_serial(certify_class()));
}

void BM_CertifyParallel(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(certify_scheme(certify_class()));
}

const std::vector<ConceptClass>& verify_corpus()
{
    static const auto corpus = random_corpus(7, 1000, 5, 8);
    return corpus;
}

void BM_VerifySerial(benchmark::State& state)
{
    VerifyOptions opts;
    opts.exec = Execution::serial;
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_all(verify_corpus(), opts));
}

void BM_VerifyParallel(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_all(verify_corpus()));
}

void BM_LdimMemo(benchmark::State& state)
{
    auto cls = random_corpus(11, 1, 6, state.range(0), state.range(0))[0];
    for (auto _ : state)
        benchmark::DoNotOptimize(ldim(cls));
}

void BM_LdimReference(benchmark::State& state)
{
    auto cls = random_corpus(11, 1, 6, state.range(0), state.range(0))[0];
    for (auto _ : state)
        benchmark::DoNotOptimize(ldim_reference(cls));
}

} // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StagedSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StagedParallel)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CertifyParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LdimMemo)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LdimReference)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
