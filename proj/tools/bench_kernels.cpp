#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <utility>
#include <vector>

#include "coil/ufl.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Times the serial reference implementations against the OpenMP kernels and
// checks that both produce identical solutions. Speedup is reported, not
// asserted: on a single-core host the parallel kernels only break even.
//
// Usage: bench_kernels [reps] [quick]

using namespace coil;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    f();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    best = std::min(best, ms);
  }
  return best;
}

bool same(const UflSolution& a, const UflSolution& b) {
  return a.total_cost == b.total_cost && a.open == b.open &&
         a.assignment == b.assignment;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  if (reps < 1) reps = 1;
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "quick") == 0) quick = true;

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif

  int bad = 0;

  std::vector<std::pair<int, int>> greedy_sizes =
      quick ? std::vector<std::pair<int, int>>{{120, 80}}
            : std::vector<std::pair<int, int>>{{200, 128}, {500, 320}, {1000, 800}};
  std::printf("\n%-18s %12s %12s %9s %6s\n", "greedy (d x f)", "serial ms",
              "omp ms", "speedup", "match");
  for (auto [nd, nf] : greedy_sizes) {
    InstanceGenConfig gc;
    gc.n_demands = nd;
    gc.n_facilities = nf;
    gc.infeasible_frac = 0.3;
    UflInstance inst = gen_random_instance(42, gc);
    UflSolution a, b;
    double ts = time_ms([&] { a = solve_greedy_serial(inst); }, reps);
    double tp = time_ms([&] { b = solve_greedy(inst); }, reps);
    bool ok = same(a, b);
    bad += !ok;
    char label[32];
    std::snprintf(label, sizeof label, "%d x %d", nd, nf);
    std::printf("%-18s %12.3f %12.3f %9.2f %6s\n", label, ts, tp,
                ts / std::max(tp, 1e-9), ok ? "yes" : "NO");
  }

  std::vector<std::pair<int, int>> exact_sizes =
      quick ? std::vector<std::pair<int, int>>{{10, 12}}
            : std::vector<std::pair<int, int>>{{12, 14}, {15, 16}, {18, 18}};
  std::printf("\n%-18s %12s %12s %9s %6s\n", "exact (d x f)", "serial ms",
              "omp ms", "speedup", "match");
  for (auto [nd, nf] : exact_sizes) {
    InstanceGenConfig gc;
    gc.n_demands = nd;
    gc.n_facilities = nf;
    gc.infeasible_frac = 0.2;
    UflInstance inst = gen_random_instance(43, gc);
    UflSolution a, b;
    double ts = time_ms([&] { a = solve_exact_serial(inst); }, reps);
    double tp = time_ms([&] { b = solve_exact(inst); }, reps);
    bool ok = same(a, b);
    bad += !ok;
    char label[32];
    std::snprintf(label, sizeof label, "%d x %d", nd, nf);
    std::printf("%-18s %12.3f %12.3f %9.2f %6s\n", label, ts, tp,
                ts / std::max(tp, 1e-9), ok ? "yes" : "NO");
  }

  if (bad) {
    std::fprintf(stderr, "\n%d kernel mismatches\n", bad);
    return 1;
  }
  return 0;
}
