#include "coil/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"

namespace coil {

using nlohmann::json;

void RunConfig::validate() const {
  static const std::set<std::string> known_algos = {"coil", "coil-noadapt", "cadl", "ig",
                                                    "cba"};
  if (algorithms.empty()) throw BadConfigError("algorithms: must not be empty");
  for (const auto& a : algorithms)
    if (!known_algos.count(a)) throw BadConfigError("algorithms: unknown algorithm '" + a + "'");
  if (profiles.empty()) throw BadConfigError("profiles: must not be empty");
  for (const auto& p : profiles) {
    if (p == "custom") {
      if (!has_custom_profile)
        throw BadConfigError("profiles: 'custom' requires a custom_profile object");
      custom_profile.validate();
    } else {
      profile_by_name(p);  // throws for unknown names
    }
  }
  if (seeds < 0) throw BadConfigError("seeds: must be >= 0");
  if (workers < 1) throw BadConfigError("workers: must be >= 1");
  if (!(teach_alpha > 0.0) || !(teach_beta > 0.0))
    throw BadConfigError("teach_alpha/teach_beta: must be > 0");
  if (guard_limit < 1) throw BadConfigError("guard_limit: must be >= 1");
  if (guard_mode != "delegate" && guard_mode != "abort")
    throw BadConfigError("guard_mode: must be 'delegate' or 'abort'");
  if (ig_entropy_mode != "reduction" && ig_entropy_mode != "remaining")
    throw BadConfigError("ig_entropy_mode: must be 'reduction' or 'remaining'");
  if (!(ig_beta_scale >= 0.0)) throw BadConfigError("ig_beta_scale: must be >= 0");
  if (!(confidence_alpha > 0.0 && confidence_alpha <= 1.0))
    throw BadConfigError("confidence_alpha: must be in (0, 1]");
  scenario.validate();
}

namespace {

void read_scenario(const json& j, ScenarioConfig& sc) {
  if (j.contains("n_tasks")) sc.n_tasks = j.at("n_tasks");
  if (j.contains("n_varieties")) sc.n_varieties = j.at("n_varieties");
  if (j.contains("n_goals")) sc.n_goals = j.at("n_goals");
  if (j.contains("grid_size")) sc.grid_size = j.at("grid_size");
  if (j.contains("challenging_frac")) sc.challenging_frac = j.at("challenging_frac");
  if (j.contains("frequency_weights"))
    sc.frequency_weights = j.at("frequency_weights").get<std::vector<double>>();
}

CostProfile read_profile(const json& j) {
  CostProfile p;
  p.c_rob = j.at("c_rob");
  p.c_hum = j.at("c_hum");
  p.c_pref = j.at("c_pref");
  p.c_skill = j.at("c_skill");
  p.c_skill_fail = j.at("c_skill_fail");
  p.c_pref_fail = j.at("c_pref_fail");
  return p;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfigError("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw BadConfigError("config file is not valid JSON: " + path);

  RunConfig cfg;
  try {
    if (j.contains("profiles")) cfg.profiles = j.at("profiles").get<std::vector<std::string>>();
    if (j.contains("algorithms"))
      cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds");
    if (j.contains("root_seed")) cfg.root_seed = j.at("root_seed");
    if (j.contains("scenario")) read_scenario(j.at("scenario"), cfg.scenario);
    if (j.contains("teach_alpha")) cfg.teach_alpha = j.at("teach_alpha");
    if (j.contains("teach_beta")) cfg.teach_beta = j.at("teach_beta");
    if (j.contains("guard_limit")) cfg.guard_limit = j.at("guard_limit");
    if (j.contains("guard_mode")) cfg.guard_mode = j.at("guard_mode");
    if (j.contains("ig_beta_scale")) cfg.ig_beta_scale = j.at("ig_beta_scale");
    if (j.contains("ig_entropy_mode")) cfg.ig_entropy_mode = j.at("ig_entropy_mode");
    if (j.contains("confidence_alpha")) cfg.confidence_alpha = j.at("confidence_alpha");
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir");
    if (j.contains("trace")) cfg.trace = j.at("trace");
    if (j.contains("workers")) cfg.workers = j.at("workers");
    if (j.contains("custom_profile")) {
      cfg.custom_profile = read_profile(j.at("custom_profile"));
      cfg.has_custom_profile = true;
    }
  } catch (const json::exception& e) {
    throw BadConfigError(std::string("config file field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SuiteConfig to_suite_config(const RunConfig& cfg) {
  cfg.validate();
  SuiteConfig sc;
  for (const auto& p : cfg.profiles)
    sc.profiles.push_back(
        {p, p == "custom" ? cfg.custom_profile : profile_by_name(p)});
  sc.algorithms = cfg.algorithms;
  sc.n_seeds = cfg.seeds;
  sc.root_seed = cfg.root_seed;
  sc.scenario = cfg.scenario;
  sc.episode.guard_limit = cfg.guard_limit;
  sc.episode.guard_mode =
      cfg.guard_mode == "abort" ? GuardMode::Abort : GuardMode::Delegate;
  sc.episode.teach_prior = {cfg.teach_alpha, cfg.teach_beta};
  sc.policies.cadl.alpha = cfg.confidence_alpha;
  sc.policies.cba.alpha = cfg.confidence_alpha;
  sc.policies.ig.beta_scale = cfg.ig_beta_scale;
  sc.policies.ig.entropy_mode = cfg.ig_entropy_mode == "remaining"
                                    ? IgConfig::EntropyMode::Remaining
                                    : IgConfig::EntropyMode::Reduction;
  sc.workers = cfg.workers;
  return sc;
}

std::string run_config_json(const RunConfig& cfg) {
  json j;
  j["profiles"] = cfg.profiles;
  j["algorithms"] = cfg.algorithms;
  j["seeds"] = cfg.seeds;
  j["root_seed"] = cfg.root_seed;
  j["scenario"] = {{"n_tasks", cfg.scenario.n_tasks},
                   {"n_varieties", cfg.scenario.n_varieties},
                   {"n_goals", cfg.scenario.n_goals},
                   {"grid_size", cfg.scenario.grid_size},
                   {"challenging_frac", cfg.scenario.challenging_frac},
                   {"frequency_weights", cfg.scenario.frequency_weights}};
  j["teach_alpha"] = cfg.teach_alpha;
  j["teach_beta"] = cfg.teach_beta;
  j["guard_limit"] = cfg.guard_limit;
  j["guard_mode"] = cfg.guard_mode;
  j["ig_beta_scale"] = cfg.ig_beta_scale;
  j["ig_entropy_mode"] = cfg.ig_entropy_mode;
  j["confidence_alpha"] = cfg.confidence_alpha;
  j["trace"] = cfg.trace;
  if (cfg.has_custom_profile)
    j["custom_profile"] = {{"c_rob", cfg.custom_profile.c_rob},
                           {"c_hum", cfg.custom_profile.c_hum},
                           {"c_pref", cfg.custom_profile.c_pref},
                           {"c_skill", cfg.custom_profile.c_skill},
                           {"c_skill_fail", cfg.custom_profile.c_skill_fail},
                           {"c_pref_fail", cfg.custom_profile.c_pref_fail}};
  return j.dump();
}

std::string run_config_hash(const RunConfig& cfg) {
  std::string s = run_config_json(cfg);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void BenchConfig::validate() const {
  if (sizes.empty()) throw BadConfigError("bench.sizes: must not be empty");
  for (auto [d, f] : sizes) {
    if (d < 1 || f < 1) throw BadConfigError("bench.sizes: entries must be >= 1");
    if (f > 22)
      throw BadConfigError("bench.sizes: facility count exceeds the exact-solver range");
  }
  if (count < 1) throw BadConfigError("bench.count: must be >= 1");
  if (!(infeasible_frac >= 0.0 && infeasible_frac < 1.0))
    throw BadConfigError("bench.infeasible_frac: must be in [0, 1)");
  if (!(open_lo >= 0 && open_hi >= open_lo))
    throw BadConfigError("bench.open cost range is invalid");
  if (!(service_lo >= 0 && service_hi >= service_lo))
    throw BadConfigError("bench.service cost range is invalid");
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfigError("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw BadConfigError("config file is not valid JSON: " + path);

  BenchConfig cfg;
  try {
    if (j.contains("sizes")) {
      cfg.sizes.clear();
      for (const auto& s : j.at("sizes"))
        cfg.sizes.emplace_back(s.at(0).get<int32_t>(), s.at(1).get<int32_t>());
    }
    if (j.contains("count")) cfg.count = j.at("count");
    if (j.contains("open_lo")) cfg.open_lo = j.at("open_lo");
    if (j.contains("open_hi")) cfg.open_hi = j.at("open_hi");
    if (j.contains("service_lo")) cfg.service_lo = j.at("service_lo");
    if (j.contains("service_hi")) cfg.service_hi = j.at("service_hi");
    if (j.contains("infeasible_frac")) cfg.infeasible_frac = j.at("infeasible_frac");
    if (j.contains("metric")) cfg.metric = j.at("metric");
    if (j.contains("seed")) cfg.seed = j.at("seed");
  } catch (const json::exception& e) {
    throw BadConfigError(std::string("config file field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace coil
