#include "coil/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

namespace coil {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

double speedup_of(const BenchRow& r) {
  return r.exact_ms / std::max(r.greedy_ms, 1e-6);
}

void put(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out << buf;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<BenchRow> rows;
  rows.reserve(cfg.sizes.size() * static_cast<size_t>(cfg.count));
  uint64_t k = 0;
  for (auto [nd, nf] : cfg.sizes) {
    InstanceGenConfig gc;
    gc.n_demands = nd;
    gc.n_facilities = nf;
    gc.open_lo = cfg.open_lo;
    gc.open_hi = cfg.open_hi;
    gc.service_lo = cfg.service_lo;
    gc.service_hi = cfg.service_hi;
    gc.infeasible_frac = cfg.infeasible_frac;
    gc.metric = cfg.metric;
    for (int32_t i = 0; i < cfg.count; ++i, ++k) {
      BenchRow row;
      row.n_demands = nd;
      row.n_facilities = nf;
      row.seed = cfg.seed + k;
      UflInstance inst = gen_random_instance(row.seed, gc);
      auto t0 = Clock::now();
      UflSolution g = solve_greedy(inst);
      auto t1 = Clock::now();
      UflSolution e = solve_exact(inst);
      auto t2 = Clock::now();
      row.greedy_cost = g.total_cost;
      row.exact_cost = e.total_cost;
      row.ratio = e.total_cost > 0.0 ? g.total_cost / e.total_cost : 1.0;
      row.greedy_ms = ms_between(t0, t1);
      row.exact_ms = ms_between(t1, t2);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<BenchAggregate> aggregate_bench(const std::vector<BenchRow>& rows) {
  std::vector<BenchAggregate> out;
  std::vector<std::vector<double>> speedups;
  for (const auto& r : rows) {
    size_t g = 0;
    for (; g < out.size(); ++g)
      if (out[g].n_demands == r.n_demands && out[g].n_facilities == r.n_facilities) break;
    if (g == out.size()) {
      BenchAggregate a;
      a.n_demands = r.n_demands;
      a.n_facilities = r.n_facilities;
      out.push_back(a);
      speedups.emplace_back();
    }
    BenchAggregate& a = out[g];
    a.count += 1;
    a.mean_ratio += r.ratio;
    a.max_ratio = std::max(a.max_ratio, r.ratio);
    a.mean_speedup += speedup_of(r);
    a.mean_greedy_ms += r.greedy_ms;
    a.mean_exact_ms += r.exact_ms;
    speedups[g].push_back(speedup_of(r));
  }
  for (size_t g = 0; g < out.size(); ++g) {
    BenchAggregate& a = out[g];
    a.mean_ratio /= a.count;
    a.mean_speedup /= a.count;
    a.mean_greedy_ms /= a.count;
    a.mean_exact_ms /= a.count;
    auto& sp = speedups[g];
    std::sort(sp.begin(), sp.end());
    size_t n = sp.size();
    a.median_speedup = n % 2 ? sp[n / 2] : 0.5 * (sp[n / 2 - 1] + sp[n / 2]);
  }
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n_demands,n_facilities,seed,greedy_cost,exact_cost,ratio,greedy_ms,exact_ms\n";
  for (const auto& r : rows) {
    out << r.n_demands << ',' << r.n_facilities << ',' << r.seed << ',';
    put(out, r.greedy_cost);
    out << ',';
    put(out, r.exact_cost);
    out << ',';
    put(out, r.ratio);
    out << ',';
    put(out, r.greedy_ms);
    out << ',';
    put(out, r.exact_ms);
    out << '\n';
  }
}

void write_bench_summary_csv(std::ostream& out,
                             const std::vector<BenchAggregate>& aggs) {
  out << "n_demands,n_facilities,count,mean_ratio,max_ratio,mean_speedup,"
         "median_speedup,mean_greedy_ms,mean_exact_ms\n";
  for (const auto& a : aggs) {
    out << a.n_demands << ',' << a.n_facilities << ',' << a.count << ',';
    put(out, a.mean_ratio);
    out << ',';
    put(out, a.max_ratio);
    out << ',';
    put(out, a.mean_speedup);
    out << ',';
    put(out, a.median_speedup);
    out << ',';
    put(out, a.mean_greedy_ms);
    out << ',';
    put(out, a.mean_exact_ms);
    out << '\n';
  }
}

}  // namespace coil
