// Serial reference vs OpenMP for the data-parallel kernels.
//
//   ./bench_kernels --benchmark_filter=max_infidelity
//
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dqd/kernels.hpp"
#include "dqd/linalg.hpp"
#include "dqd/states.hpp"

namespace {

using namespace dqd;

ComplexMatrix random_unitary(int dim, unsigned seed) {
  std::srand(seed);
  const ComplexMatrix a = ComplexMatrix::Random(dim, dim);
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  return expm_neg_i_Ht(h, 1.0);
}

struct InfidelityCase {
  ComplexMatrix u, u_ref;
  std::vector<StateVector> states;

  explicit InfidelityCase(int n_qubits, std::size_t n_states) {
    const int dim = 1 << n_qubits;
    u_ref = random_unitary(dim, 1);
    u = random_unitary(dim, 2);
    auto [train, val] = states::sample_sets(n_qubits, n_states, 1, 7);
    states = std::move(train.states);
  }
};

template <double (*Kernel)(const ComplexMatrix&, const ComplexMatrix&,
                           std::span<const StateVector>)>
void BM_max_infidelity(benchmark::State& st) {
  const InfidelityCase c(static_cast<int>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(c.u, c.u_ref, c.states));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}

template <ComplexMatrix (*Kernel)(std::span<const ComplexMatrix>)>
void BM_propagate_columns(benchmark::State& st) {
  const int dim = 1 << st.range(0);
  std::vector<ComplexMatrix> props;
  for (int k = 0; k < st.range(1); ++k) props.push_back(random_unitary(dim, 10u + k));
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(props));
}

template <void (*Kernel)(std::size_t, const std::function<void(std::size_t)>&)>
void BM_for_each_index(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexMatrix u = random_unitary(8, 3);
  std::vector<double> out(n);
  for (auto _ : st) {
    Kernel(n, [&](std::size_t i) { out[i] = std::abs((u * u.adjoint()).trace()); });
    benchmark::DoNotOptimize(out.data());
  }
}

BENCHMARK(BM_max_infidelity<kernels::serial::max_infidelity>)
    ->Name("max_infidelity/serial")
    ->Args({1, 100})
    ->Args({2, 100})
    ->Args({2, 1000});
BENCHMARK(BM_max_infidelity<kernels::omp::max_infidelity>)
    ->Name("max_infidelity/omp")
    ->Args({1, 100})
    ->Args({2, 100})
    ->Args({2, 1000});

BENCHMARK(BM_propagate_columns<kernels::serial::propagate_columns>)
    ->Name("propagate_columns/serial")
    ->Args({3, 12})
    ->Args({5, 12});
BENCHMARK(BM_propagate_columns<kernels::omp::propagate_columns>)
    ->Name("propagate_columns/omp")
    ->Args({3, 12})
    ->Args({5, 12});

BENCHMARK(BM_for_each_index<kernels::serial::for_each_index>)
    ->Name("for_each_index/serial")
    ->Arg(64)
    ->Arg(1024);
BENCHMARK(BM_for_each_index<kernels::omp::for_each_index>)
    ->Name("for_each_index/omp")
    ->Arg(64)
    ->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
