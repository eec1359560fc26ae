// Serial vs OpenMP timings for the subset-entropy and partial-trace kernels,
// plus the digit-by-digit reference partial trace. Usage:
//   mqmi_bench [n_qubits=7] [repeats=5]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "mqmi/kernels.hpp"
#include "mqmi/states.hpp"

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mqmi;
  const int n = argc > 1 ? std::atoi(argv[1]) : 7;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  if (n < 2 || n > 8 || repeats < 1) {
    std::fprintf(stderr, "usage: mqmi_bench [n_qubits in 2..8] [repeats >= 1]\n");
    return 2;
  }
  const auto state = random_mixed(std::vector<int>(n, 2), 1 << n, 11);
  std::vector<SubsystemSet> subsets;
  for (std::uint32_t m = 1; m < (1u << n); ++m) subsets.push_back(SubsystemSet::from_mask(m));
  const auto keep = SubsystemSet::range(0, n / 2);

  std::printf("n=%d qubits, dim=%d, threads=%d, best of %d\n", n, state.dimension(), omp_get_max_threads(),
              repeats);
  volatile double sink = 0.0;
  const double ent_serial = best_of(repeats, [&] {
    sink = sink + kernels::subset_entropies(state, subsets, Execution::serial).back();
  });
  const double ent_parallel = best_of(repeats, [&] {
    sink = sink + kernels::subset_entropies(state, subsets, Execution::parallel).back();
  });
  const double pt_serial = best_of(repeats, [&] {
    sink = sink + kernels::partial_trace(state.matrix(), state.dims(), keep, Execution::serial)(0, 0).real();
  });
  const double pt_parallel = best_of(repeats, [&] {
    sink = sink + kernels::partial_trace(state.matrix(), state.dims(), keep, Execution::parallel)(0, 0).real();
  });
  const double pt_reference = best_of(repeats, [&] {
    sink = sink + kernels::partial_trace_reference(state.matrix(), state.dims(), keep)(0, 0).real();
  });

  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "omp ms", "speedup");
  std::printf("%-28s %10.3f %10.3f %8.2f\n", "subset_entropies (all sets)", ent_serial, ent_parallel,
              ent_serial / ent_parallel);
  std::printf("%-28s %10.3f %10.3f %8.2f\n", "partial_trace", pt_serial, pt_parallel, pt_serial / pt_parallel);
  std::printf("%-28s %10.3f %10s %8s\n", "partial_trace_reference", pt_reference, "-", "-");
  return 0;
}
