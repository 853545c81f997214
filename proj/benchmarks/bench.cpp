// Micro-benchmarks of the verifier stages on generated queries. The suite is
// generated once per process, so every benchmark sees the same inputs.

#include "harness.hpp"
#include "nnproof/checker.hpp"
#include "nnproof/lp.hpp"
#include "nnproof/minimizer.hpp"
#include "nnproof/search.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace nnproof;

namespace {

const std::vector<harness::GeneratedQuery> &suite(std::size_t neurons)
{
    static std::map<std::size_t, std::vector<harness::GeneratedQuery>> cache;
    auto &entry = cache[neurons];
    if (entry.empty()) {
        harness::GenConfig config;
        config.layers = 1;
        config.neurons = neurons;
        config.count = 16;
        entry = harness::generate_suite(config);
    }
    return entry;
}

std::vector<ProofTree> unsat_proofs(std::size_t neurons, minimizer::Mode mode)
{
    std::vector<ProofTree> proofs;
    VerifyConfig config;
    config.mode = mode;
    for (const auto &q : suite(neurons)) {
        auto verdict = verify(q.network, q.property, config);
        if (verdict.is_unsat())
            proofs.push_back(std::get<Unsat>(verdict.outcome).proof);
    }
    return proofs;
}

void BM_RootLp(benchmark::State &state)
{
    std::vector<TableauQuery> queries;
    for (const auto &q : suite(static_cast<std::size_t>(state.range(0)))) {
        auto query = encode_query(q.network, q.property);
        // An empty encoded box never reaches the LP in the search.
        bool empty = false;
        for (VarIndex v = 0; v < query.var_count(); ++v)
            empty = empty || query.lower[v] > query.upper[v];
        if (!empty)
            queries.push_back(std::move(query));
    }
    for (auto _ : state)
        for (const auto &q : queries)
            benchmark::DoNotOptimize(lp::solve(q));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(queries.size()));
}

void BM_Verify(benchmark::State &state)
{
    const auto mode = static_cast<minimizer::Mode>(state.range(1));
    VerifyConfig config;
    config.mode = mode;
    const auto &queries = suite(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        for (const auto &q : queries)
            benchmark::DoNotOptimize(verify(q.network, q.property, config));
    state.SetLabel(minimizer::mode_name(mode));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(queries.size()));
}

void BM_Check(benchmark::State &state)
{
    const auto mode = static_cast<minimizer::Mode>(state.range(1));
    const auto proofs = unsat_proofs(static_cast<std::size_t>(state.range(0)), mode);
    for (auto _ : state)
        for (const auto &p : proofs)
            benchmark::DoNotOptimize(checker::check_proof(p));
    state.SetLabel(minimizer::mode_name(mode));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(proofs.size()));
}

void BM_MinimizeOffline(benchmark::State &state)
{
    const auto mode = static_cast<minimizer::Mode>(state.range(1));
    const auto proofs = unsat_proofs(static_cast<std::size_t>(state.range(0)), minimizer::Mode::None);
    for (auto _ : state) {
        auto copies = proofs;
        for (auto &p : copies)
            minimizer::minimize_offline(p, mode);
        benchmark::DoNotOptimize(copies);
    }
    state.SetLabel(minimizer::mode_name(mode));
}

void BM_Serialize(benchmark::State &state)
{
    const auto proofs = unsat_proofs(static_cast<std::size_t>(state.range(0)), minimizer::Mode::None);
    for (auto _ : state)
        for (const auto &p : proofs)
            benchmark::DoNotOptimize(deserialize_proof(serialize_proof(p)));
}

void mode_args(benchmark::internal::Benchmark *b)
{
    for (const long neurons : {4, 8})
        for (const auto mode : {minimizer::Mode::None, minimizer::Mode::Deps, minimizer::Mode::Greedy,
                                minimizer::Mode::Global})
            b->Args({neurons, static_cast<long>(mode)});
}

} // namespace

BENCHMARK(BM_RootLp)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Verify)->Apply(mode_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Check)->Apply(mode_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MinimizeOffline)->Apply(mode_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Serialize)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
