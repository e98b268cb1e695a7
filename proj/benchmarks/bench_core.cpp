#include <benchmark/benchmark.h>

#include <vector>

#include "tsclean/anomaly.hpp"
#include "tsclean/arima.hpp"
#include "tsclean/correlogram.hpp"
#include "tsclean/simulate.hpp"

using namespace tsclean;

namespace {

std::vector<double> bench_series(std::size_t n) {
    ArmaProcessSpec spec;
    spec.phi = {0.6, 0.2};
    spec.theta = {0.4};
    spec.mean = 100.0;
    return simulate_arma(spec, n, 42);
}

void BM_acf(benchmark::State& state) {
    std::vector<double> x = bench_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(acf(x, 40));
    }
}
BENCHMARK(BM_acf)->Arg(1000)->Arg(2500);

void BM_pacf(benchmark::State& state) {
    std::vector<double> x = bench_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pacf(x, 40));
    }
}
BENCHMARK(BM_pacf)->Arg(1000)->Arg(2500);

void BM_fit_ar(benchmark::State& state) {
    std::vector<double> x = bench_series(2500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ar(x, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_fit_ar)->Arg(2)->Arg(15);

void BM_fit_ma_on_residuals(benchmark::State& state) {
    Residuals res;
    res.values = bench_series(2500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ma_on_residuals(res, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_fit_ma_on_residuals)->Arg(5)->Arg(30);

void BM_select_model(benchmark::State& state) {
    TimeSeries x(bench_series(1000), 2.0);
    SelectionBounds bounds;
    bounds.p_max = 5;
    bounds.q_max = 5;
    SelectionOptions options;
    options.min_train = 200;
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_model(x, bounds, options));
    }
}
BENCHMARK(BM_select_model);

void BM_forecast_25(benchmark::State& state) {
    TimeSeries x(bench_series(2500), 2.0);
    SelectionBounds bounds;
    bounds.p_max = 3;
    bounds.q_max = 3;
    SelectionOptions options;
    options.min_train = 200;
    ArimaModel model = select_model(x, bounds, options).model;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forecast(model, x, 25));
    }
}
BENCHMARK(BM_forecast_25);

void BM_process_reading_stream(benchmark::State& state) {
    std::vector<double> stream = bench_series(1200);
    TimeSeries train(std::vector<double>(stream.begin(), stream.begin() + 200), 2.0, 0.0);
    SelectionBounds bounds;
    bounds.p_max = 3;
    bounds.q_max = 2;
    SelectionOptions selection;
    selection.min_train = 200;
    ArimaModel model = select_model(train, bounds, selection).model;

    ProcessOptions options;
    options.bounds = bounds;
    options.selection = selection;

    for (auto _ : state) {
        NodeStreamState node;
        node.model = model;
        node.history.assign(stream.begin(), stream.begin() + 200);
        node.interval = 2.0;
        for (std::size_t i = 200; i < stream.size(); ++i) {
            SensorReading reading;
            reading.timestamp = node.next_timestamp();
            reading.value = stream[i];
            benchmark::DoNotOptimize(process_reading(node, reading, options));
        }
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1000);
}
BENCHMARK(BM_process_reading_stream)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
