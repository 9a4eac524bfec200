#include <benchmark/benchmark.h>

#include <random>

#include "ssu/geometry.hpp"
#include "ssu/scheduler.hpp"
#include "ssu/sgp4.hpp"
#include "ssu/tle.hpp"

using namespace ssu;

namespace {

const std::vector<OrbitalElements>& snapshot() {
    static const auto relays = load_tle_file(std::string(SSU_DATA_DIR) + "/tle/starlink_snapshot.tle");
    return relays;
}

const UtcTime kStart = parse_utc("2025-03-01T00:00:00Z");

void BM_Sgp4Propagate(benchmark::State& state) {
    const Sgp4 prop(snapshot().front());
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(prop.propagate(add_seconds(kStart, t)));
        t += 15.0;
        if (t > 86400.0) t = 0.0;
    }
}
BENCHMARK(BM_Sgp4Propagate);

void BM_SnapshotPropagation(benchmark::State& state) {
    std::vector<Sgp4> props;
    for (const auto& e : snapshot()) props.emplace_back(e);
    for (auto _ : state) {
        for (const Sgp4& p : props) benchmark::DoNotOptimize(p.propagate(kStart));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(props.size()));
}
BENCHMARK(BM_SnapshotPropagation)->Unit(benchmark::kMillisecond);

void BM_CandidatesWithin(benchmark::State& state) {
    std::vector<StateVector> relays;
    std::vector<int> ids;
    for (const auto& e : snapshot()) {
        relays.push_back(Sgp4(e).propagate(kStart));
        ids.push_back(e.catalog_id);
    }
    const StateVector user = relays[relays.size() / 2];
    for (auto _ : state) {
        benchmark::DoNotOptimize(candidates_within(user, relays, static_cast<double>(state.range(0)), ids));
    }
}
BENCHMARK(BM_CandidatesWithin)->Arg(500)->Arg(1500)->Unit(benchmark::kMicrosecond);

void BM_SolveSession(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> val(0.0, 1e9);
    std::bernoulli_distribution feasible(0.2);
    SessionProblem p;
    p.value = Matrix<double>(n, m, 0.0);
    p.feasible = BoolMatrix(n, m, 0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (feasible(rng)) {
                p.feasible(j, i) = 1;
                p.value(j, i) = val(rng);
            }
        }
    }
    p.capacity.assign(n, 4);
    p.penalty_fraction = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(solve_session(p));
}
BENCHMARK(BM_SolveSession)->Args({50, 60})->Args({200, 339})->Unit(benchmark::kMillisecond);

void BM_Hungarian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> val(-1.0, 0.0);
    Matrix<double> c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = val(rng);
    for (auto _ : state) benchmark::DoNotOptimize(hungarian_min_cost(c));
}
BENCHMARK(BM_Hungarian)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
