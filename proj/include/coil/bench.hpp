#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "coil/config.hpp"
#include "coil/ufl.hpp"

namespace coil {

struct BenchRow {
  int32_t n_demands = 0;
  int32_t n_facilities = 0;
  uint64_t seed = 0;
  double greedy_cost = 0.0;
  double exact_cost = 0.0;
  double ratio = 1.0;  // greedy / exact, 1.0 when the optimum is zero
  double greedy_ms = 0.0;
  double exact_ms = 0.0;
};

struct BenchAggregate {
  int32_t n_demands = 0;
  int32_t n_facilities = 0;
  int32_t count = 0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  double mean_speedup = 0.0;  // per-instance exact_ms / greedy_ms
  double median_speedup = 0.0;
  double mean_greedy_ms = 0.0;
  double mean_exact_ms = 0.0;
};

// One row per (size, instance); instance seeds derive from cfg.seed by
// running index, so the whole sweep is reproducible from one number.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

// Grouped by size in first-seen order.
std::vector<BenchAggregate> aggregate_bench(const std::vector<BenchRow>& rows);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_bench_summary_csv(std::ostream& out,
                             const std::vector<BenchAggregate>& aggs);

}  // namespace coil
