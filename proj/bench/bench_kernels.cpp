// Serial reference kernels against the OpenMP kernels on layer shapes from
// the 100 x 100 network.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ppnet/kernels/kernels.hpp"

using namespace ppnet::kernels;

namespace {

std::vector<float> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

ConvGeometry geometry(const benchmark::State& state) {
    ConvGeometry g;
    g.batch = 8;
    g.in_channels = static_cast<int>(state.range(0));
    g.out_channels = static_cast<int>(state.range(1));
    g.in_h = g.in_w = static_cast<int>(state.range(2));
    g.kernel = static_cast<int>(state.range(3));
    g.pad = g.kernel / 2;
    return g;
}

void set_counters(benchmark::State& state, const ConvGeometry& g) {
    const double macs = static_cast<double>(g.batch) * g.out_channels * g.out_h() * g.out_w() * g.in_channels *
                        g.kernel * g.kernel;
    state.counters["MAC/s"] = benchmark::Counter(macs, benchmark::Counter::kIsIterationInvariantRate);
}

template <bool Parallel>
void BM_conv_forward(benchmark::State& state) {
    const auto g = geometry(state);
    const auto x = random_vector(static_cast<std::size_t>(g.batch) * g.in_channels * g.in_h * g.in_w, 1);
    const auto w = random_vector(g.weight_size(), 2);
    std::vector<float> y(static_cast<std::size_t>(g.batch) * g.out_channels * g.out_h() * g.out_w());
    for (auto _ : state) {
        if constexpr (Parallel)
            conv2d_forward(g, x.data(), w.data(), y.data());
        else
            reference::conv2d_forward(g, x.data(), w.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    set_counters(state, g);
}

template <bool Parallel>
void BM_conv_backward_weights(benchmark::State& state) {
    const auto g = geometry(state);
    const auto x = random_vector(static_cast<std::size_t>(g.batch) * g.in_channels * g.in_h * g.in_w, 1);
    const auto dy = random_vector(static_cast<std::size_t>(g.batch) * g.out_channels * g.out_h() * g.out_w(), 3);
    std::vector<float> dw(g.weight_size());
    for (auto _ : state) {
        if constexpr (Parallel)
            conv2d_backward_weights(g, x.data(), dy.data(), dw.data());
        else
            reference::conv2d_backward_weights(g, x.data(), dy.data(), dw.data());
        benchmark::DoNotOptimize(dw.data());
    }
    set_counters(state, g);
}

void BM_gemm(benchmark::State& state, bool parallel) {
    const int n = static_cast<int>(state.range(0));
    const auto a = random_vector(static_cast<std::size_t>(n) * n, 4);
    const auto b = random_vector(static_cast<std::size_t>(n) * n, 5);
    std::vector<float> c(static_cast<std::size_t>(n) * n);
    for (auto _ : state) {
        if (parallel)
            gemm_nn(n, n, n, a.data(), b.data(), c.data());
        else
            reference::gemm_nn(n, n, n, a.data(), b.data(), c.data());
        benchmark::DoNotOptimize(c.data());
    }
    state.counters["MAC/s"] =
        benchmark::Counter(static_cast<double>(n) * n * n, benchmark::Counter::kIsIterationInvariantRate);
}

// in_channels, out_channels, edge, kernel
void conv_shapes(benchmark::internal::Benchmark* b) {
    b->Args({10, 64, 100, 3})->Args({64, 64, 100, 1})->Args({64, 64, 50, 3})->Args({256, 128, 25, 1});
    b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_conv_forward<false>)->Name("conv_forward/reference")->Apply(conv_shapes);
BENCHMARK(BM_conv_forward<true>)->Name("conv_forward/parallel")->Apply(conv_shapes);
BENCHMARK(BM_conv_backward_weights<false>)->Name("conv_backward_weights/reference")->Apply(conv_shapes);
BENCHMARK(BM_conv_backward_weights<true>)->Name("conv_backward_weights/parallel")->Apply(conv_shapes);
BENCHMARK_CAPTURE(BM_gemm, reference, false)->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(BM_gemm, parallel, true)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
