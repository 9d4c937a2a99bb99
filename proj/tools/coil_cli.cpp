#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coil/bench.hpp"
#include "coil/config.hpp"
#include "coil/trace.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace coil;

// Exit codes: 0 ok, 1 invariant violation, 2 bad config or usage,
// 3 I/O failure, 4 internal error.

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    size_t a = cur.find_first_not_of(" \t");
    size_t b = cur.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
  }
  return out;
}

const CostProfile& profile_of(const SuiteConfig& sc, const std::string& name) {
  for (const auto& p : sc.profiles)
    if (p.name == name) return p.profile;
  throw BadConfigError("unknown profile in results: " + name);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::ios_base::failure("cannot write " + p.string());
  return f;
}

void write_results_csv(std::ostream& out, const std::vector<SuiteRow>& rows) {
  out << "seed,algorithm,profile,n_teach,n_human,n_pref,n_robot,"
         "realized_cost,runtime_ms\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.algorithm << ',' << r.profile << ','
        << r.metrics.n_teach << ',' << r.metrics.n_human << ','
        << r.metrics.n_pref << ',' << r.metrics.n_robot << ','
        << fmt(r.metrics.realized_cost) << ',' << fmt(r.metrics.runtime_ms)
        << '\n';
  }
}

void print_summary(const std::vector<Aggregate>& aggs) {
  std::printf("%-8s %-13s %4s %18s %7s %7s %7s %7s\n", "profile", "algorithm",
              "n", "cost mean (std)", "teach", "human", "pref", "robot");
  for (const auto& a : aggs) {
    char cost[48];
    std::snprintf(cost, sizeof cost, "%.2f (%.2f)", a.cost_mean, a.cost_std);
    std::printf("%-8s %-13s %4d %18s %7.2f %7.2f %7.2f %7.2f\n",
                a.profile.c_str(), a.algorithm.c_str(), a.n, cost, a.teach_mean,
                a.human_mean, a.pref_mean, a.robot_mean);
  }
}

int cmd_run(RunConfig cfg, const std::string& out_dir) {
  cfg.validate();
  fs::path out = out_dir.empty() ? "results" : out_dir;
  fs::create_directories(out);

  SuiteConfig sc = to_suite_config(cfg);
  sc.keep_logs = cfg.trace;
  SuiteResult res = run_suite(sc);

  {
    auto f = open_out(out / "results.csv");
    write_results_csv(f, res.rows);
  }
  {
    nlohmann::json meta;
    meta["artifact_version"] = kArtifactVersion;
    meta["config_hash"] = run_config_hash(cfg);
    meta["root_seed"] = cfg.root_seed;
    meta["n_rows"] = res.rows.size();
    meta["config"] = nlohmann::json::parse(run_config_json(cfg));
    auto f = open_out(out / "run_meta.json");
    f << meta.dump(2) << '\n';
  }
  if (cfg.trace) {
    fs::create_directories(out / "traces");
    fs::create_directories(out / "scenarios");
    for (size_t i = 0; i < res.rows.size(); ++i) {
      const auto& r = res.rows[i];
      std::string name = "trace_" + r.profile + "_" + r.algorithm + "_seed" +
                         std::to_string(r.seed) + ".jsonl";
      auto f = open_out(out / "traces" / name);
      write_trace(f, r.algorithm, r.seed, profile_of(sc, r.profile),
                  res.logs[i]);
    }
    for (const auto& scn : res.scenarios) {
      auto f = open_out(out / "scenarios" /
                        ("scenario_seed" + std::to_string(scn.seed) + ".json"));
      write_scenario_json(f, scn);
    }
  }

  print_summary(aggregate(res.rows));
  std::printf("wrote %zu rows to %s\n", res.rows.size(),
              (out / "results.csv").string().c_str());
  return 0;
}

int cmd_bench_ufl(const BenchConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  fs::path out = out_dir.empty() ? "results" : out_dir;
  fs::create_directories(out);

  auto rows = run_bench(cfg);
  auto aggs = aggregate_bench(rows);
  {
    auto f = open_out(out / "bench_ufl.csv");
    write_bench_csv(f, rows);
  }
  {
    auto f = open_out(out / "bench_ufl_summary.csv");
    write_bench_summary_csv(f, aggs);
  }
  {
    nlohmann::json meta;
    meta["artifact_version"] = kArtifactVersion;
    meta["seed"] = cfg.seed;
    meta["count"] = cfg.count;
    auto f = open_out(out / "bench_meta.json");
    f << meta.dump(2) << '\n';
  }

  std::printf("%9s %12s %6s %11s %10s %13s %15s\n", "demands", "facilities",
              "n", "mean ratio", "max ratio", "mean speedup", "median speedup");
  for (const auto& a : aggs)
    std::printf("%9d %12d %6d %11.4f %10.4f %13.1f %15.1f\n", a.n_demands,
                a.n_facilities, a.count, a.mean_ratio, a.max_ratio,
                a.mean_speedup, a.median_speedup);
  std::printf("wrote %zu rows to %s\n", rows.size(),
              (out / "bench_ufl.csv").string().c_str());
  return 0;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "cannot open %s\n", path.c_str());
    return 3;
  }
  ReplaySummary s = replay_verify(in);
  std::printf("ok: %d steps, total cost %s\n", s.steps, fmt(s.total_cost).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive-learning planner: experiments, solver benchmarks, trace replay"};
  app.require_subcommand(1);

  std::string run_config_path, run_profile, run_algos, run_out;
  int32_t run_seeds = -1;
  double run_frac = -1.0;
  bool run_trace = false;
  int32_t run_workers = 0;
  auto* run = app.add_subcommand("run", "Run an experiment suite");
  run->add_option("--config", run_config_path, "JSON config file");
  run->add_option("--profile", run_profile, "Cost profile")
      ->check(CLI::IsMember({"low", "med", "high", "custom"}));
  run->add_option("--algos", run_algos, "Comma-separated algorithms");
  run->add_option("--seeds", run_seeds, "Episodes per (profile, algorithm)");
  run->add_option("--challenging-frac", run_frac,
                  "Fraction of varieties that never learn");
  run->add_flag("--trace", run_trace, "Write per-episode JSONL traces");
  run->add_option("--out", run_out, "Output directory (default: results)");
  run->add_option("--workers", run_workers, "Episode fan-out width");

  std::string bench_config_path, bench_out;
  auto* bench = app.add_subcommand("bench-ufl", "Greedy vs exact benchmark");
  bench->add_option("--config", bench_config_path, "JSON config file");
  bench->add_option("--out", bench_out, "Output directory (default: results)");

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "Verify a recorded trace");
  replay->add_option("file", trace_path, "JSONL trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg;
      if (!run_config_path.empty()) cfg = load_run_config(run_config_path);
      if (!run_profile.empty()) cfg.profiles = {run_profile};
      if (!run_algos.empty()) cfg.algorithms = split_list(run_algos);
      if (run_seeds >= 0) cfg.seeds = run_seeds;
      if (run_frac >= 0.0) cfg.scenario.challenging_frac = run_frac;
      if (run_trace) cfg.trace = true;
      if (run_workers > 0) cfg.workers = run_workers;
      if (!run_out.empty()) cfg.out_dir = run_out;
      if (const char* env = std::getenv("COIL_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (!end || *end != '\0' || env == end)
          throw BadConfigError("COIL_SEED: not an unsigned integer");
        cfg.root_seed = v;
      }
      return cmd_run(cfg, cfg.out_dir);
    }
    if (bench->parsed()) {
      BenchConfig cfg;
      if (!bench_config_path.empty()) cfg = load_bench_config(bench_config_path);
      return cmd_bench_ufl(cfg, bench_out);
    }
    if (replay->parsed()) return cmd_replay(trace_path);
  } catch (const BadConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const InvariantViolationError& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 2;
}
