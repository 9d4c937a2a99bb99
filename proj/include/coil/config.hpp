#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coil/gridworld.hpp"

namespace coil {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Experiment settings; JSON file fields use the same names as the struct
// members. Flags override file values.
struct RunConfig {
  std::vector<std::string> profiles = {"med"};
  std::vector<std::string> algorithms = {"coil", "cadl", "ig", "cba"};
  int32_t seeds = 30;
  uint64_t root_seed = 1;
  ScenarioConfig scenario;
  // Prior over teach success for unseen varieties. The near-one default makes
  // an untried variety look learnable while still collapsing after a failure.
  double teach_alpha = 1.0;
  double teach_beta = 1e-12;
  int32_t guard_limit = 25;
  std::string guard_mode = "delegate";  // or "abort"
  double ig_beta_scale = 0.01;
  std::string ig_entropy_mode = "reduction";  // or "remaining"
  double confidence_alpha = 0.8;
  std::string out_dir;
  bool trace = false;
  int32_t workers = 1;
  bool has_custom_profile = false;
  CostProfile custom_profile;  // used when profiles contains "custom"

  void validate() const;  // throws BadConfigError naming the offending field
};

RunConfig load_run_config(const std::string& path);

// Resolves names, priors and policy knobs into a runnable suite.
SuiteConfig to_suite_config(const RunConfig& cfg);

// FNV-1a over the canonical JSON rendering; stable across runs.
std::string run_config_hash(const RunConfig& cfg);
std::string run_config_json(const RunConfig& cfg);

struct BenchConfig {
  std::vector<std::pair<int32_t, int32_t>> sizes = {{8, 8}, {12, 12}, {15, 15}};
  int32_t count = 20;  // instances per size
  double open_lo = 1.0, open_hi = 100.0;
  double service_lo = 1.0, service_hi = 50.0;
  double infeasible_frac = 0.2;
  bool metric = false;
  uint64_t seed = 7;

  void validate() const;  // sizes must stay within the exact-solver range
};

BenchConfig load_bench_config(const std::string& path);

}  // namespace coil
