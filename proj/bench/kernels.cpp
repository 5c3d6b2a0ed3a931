// Parallel kernels against their serial reference counterparts.
// Run with --benchmark_counters_tabular=true for a compact table; set
// OMP_NUM_THREADS to vary the parallel side.

#include <benchmark/benchmark.h>

#include "semnet/cnn/cnn_model.hpp"
#include "semnet/numerics/gemm.hpp"
#include "semnet/numerics/layers.hpp"
#include "semnet/numerics/random.hpp"
#include "semnet/numerics/reference.hpp"
#include "semnet/numerics/sparse.hpp"

namespace {

using semnet::Rng;
using semnet::Tensor;

Tensor<float> random_tensor(semnet::Shape shape, std::uint64_t seed) {
  Rng rng(seed);
  Tensor<float> t(std::move(shape));
  for (float& v : t.values()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return t;
}

// Citation-graph-like adjacency: n rows with about `per_row` random entries.
semnet::SparseMatrix random_graph(std::size_t n, std::size_t per_row, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<semnet::Triplet> entries;
  for (std::size_t r = 0; r < n; ++r) {
    entries.push_back({r, r, 1.0});
    for (std::size_t j = 0; j < per_row; ++j) entries.push_back({r, rng.uniform_index(n), 0.5});
  }
  return semnet::SparseMatrix::from_triplets(n, n, std::move(entries));
}

void set_flops(benchmark::State& state, double flops_per_iteration) {
  state.counters["GFLOPS"] = benchmark::Counter(flops_per_iteration * 1e-9,
                                                benchmark::Counter::kIsIterationInvariantRate);
}

template <bool Parallel>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_tensor({n, n}, 1);
  const auto b = random_tensor({n, n}, 2);
  for (auto _ : state) {
    auto c = Parallel ? semnet::matmul(a, b) : semnet::reference::matmul(a, b);
    benchmark::DoNotOptimize(c.data());
  }
  set_flops(state, 2.0 * n * n * n);
}

// Second convolution of the MNIST network on a training minibatch.
template <bool Parallel>
void BM_Conv2d(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto input = random_tensor({batch, 32, 14, 14}, 3);
  const auto kernels = random_tensor({64, 32, 5, 5}, 4);
  const auto bias = random_tensor({64}, 5);
  for (auto _ : state) {
    auto y = Parallel ? semnet::conv2d_forward(input, kernels, bias, semnet::Padding::Same)
                      : semnet::reference::conv2d_forward(input, kernels, bias,
                                                          semnet::Padding::Same);
    benchmark::DoNotOptimize(y.data());
  }
  set_flops(state, 2.0 * batch * 64 * 14 * 14 * 32 * 25);
}

// One GCN propagation: normalized adjacency times a hidden-layer activation.
template <bool Parallel>
void BM_Spmm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = random_graph(n, 4, 6);
  const auto d = random_tensor({n, 16}, 7);
  for (auto _ : state) {
    auto y = Parallel ? semnet::spmm(s, d) : semnet::reference::spmm(s, d);
    benchmark::DoNotOptimize(y.data());
  }
  set_flops(state, 2.0 * static_cast<double>(s.nnz()) * 16);
}

template <bool Parallel>
void BM_Maxpool(benchmark::State& state) {
  const auto input = random_tensor({static_cast<std::size_t>(state.range(0)), 64, 14, 14}, 8);
  for (auto _ : state) {
    if constexpr (Parallel) {
      auto y = semnet::maxpool2_forward(input);
      benchmark::DoNotOptimize(y.output.data());
    } else {
      auto y = semnet::reference::maxpool2(input);
      benchmark::DoNotOptimize(y.data());
    }
  }
}

// Forward and backward pass of the full network on one minibatch.
void BM_CnnTrainStep(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto model = semnet::cnn_init<float>(9);
  const auto images = random_tensor({batch, 1, 28, 28}, 10);
  std::vector<int> labels(batch);
  for (std::size_t i = 0; i < batch; ++i) labels[i] = static_cast<int>(i % 10);
  for (auto _ : state) {
    auto loss = semnet::cnn_loss_and_gradient(model, images, labels);
    benchmark::DoNotOptimize(loss.loss);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}

BENCHMARK(BM_Matmul<true>)->Name("matmul/parallel")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Matmul<false>)->Name("matmul/reference")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Conv2d<true>)->Name("conv2d/parallel")->Arg(8)->Arg(32);
BENCHMARK(BM_Conv2d<false>)->Name("conv2d/reference")->Arg(8)->Arg(32);
BENCHMARK(BM_Spmm<true>)->Name("spmm/parallel")->Arg(2708)->Arg(19717);
BENCHMARK(BM_Spmm<false>)->Name("spmm/reference")->Arg(2708)->Arg(19717);
BENCHMARK(BM_Maxpool<true>)->Name("maxpool2/parallel")->Arg(32);
BENCHMARK(BM_Maxpool<false>)->Name("maxpool2/reference")->Arg(32);
BENCHMARK(BM_CnnTrainStep)->Name("cnn_train_step")->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
