// Serial reference loop against the OpenMP point loop on the builtin scenario.

#include "bislant/runner.hpp"
#include "bislant/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

void run_command(benchmark::State& state, bislant::Command command, bislant::Execution execution)
{
    const auto sc = bislant::load_builtin("paper-example");
    bislant::RunOverrides ov;
    ov.grid = static_cast<std::size_t>(state.range(0));
    std::size_t points = 0;
    for (auto _ : state) {
        auto report = bislant::run(sc, command, ov, execution);
        points += report.requested;
        benchmark::DoNotOptimize(report);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(points));
}

void BM_frame_serial(benchmark::State& s) { run_command(s, bislant::Command::FrameReport, bislant::Execution::Serial); }
void BM_frame_parallel(benchmark::State& s) { run_command(s, bislant::Command::FrameReport, bislant::Execution::Parallel); }
void BM_all_serial(benchmark::State& s) { run_command(s, bislant::Command::All, bislant::Execution::Serial); }
void BM_all_parallel(benchmark::State& s) { run_command(s, bislant::Command::All, bislant::Execution::Parallel); }

} // namespace

BENCHMARK(BM_frame_serial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_frame_parallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_all_serial)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_all_parallel)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
