#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "coil/baselines.hpp"
#include "coil/planner.hpp"

namespace coil {

struct BadConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  int32_t n_tasks = 15;
  int32_t n_varieties = 9;
  int32_t n_goals = 3;
  int32_t grid_size = 17;
  double challenging_frac = 0.0;
  std::vector<double> frequency_weights;  // empty = uniform over varieties

  void validate() const;
};

struct VarietyInfo {
  int32_t id = 0;
  std::string object_type;
  std::string color;
};

// A fully materialized episode world: the task sequence is known up front,
// hidden preferences are per variety, challenging varieties never learn.
struct Scenario {
  uint64_t seed = 0;
  int32_t grid_size = 17;
  std::vector<VarietyInfo> varieties;
  PreferenceSpace goals;
  std::vector<TaskFeatures> sequence;
  std::vector<int32_t> hidden_prefs;  // per variety id
  std::set<int32_t> challenging;
};

// Deterministic in (seed, config); positions are drawn but inert.
Scenario generate_scenario(uint64_t seed, const ScenarioConfig& cfg);

// Number of challenging varieties for a fraction: round half up.
int32_t challenging_count(double frac, int32_t n_varieties);

class GridOracle : public Oracle {
 public:
  explicit GridOracle(const Scenario& sc) : sc_(&sc) {}
  int32_t answer_pref(int32_t task_index) override;
  bool teach_attempt(int32_t task_index) override;
  ExecOutcome judge_execution(int32_t task_index, const Skill& skill,
                              int32_t theta) override;

 private:
  const Scenario* sc_;
};

struct EpisodeMetrics {
  int32_t n_teach = 0, n_human = 0, n_pref = 0, n_robot = 0;
  double realized_cost = 0.0;
  double penalty_total = 0.0;
  double planned_cost_initial = 0.0;
  double runtime_ms = 0.0;
};

EpisodeMetrics metrics_from_log(const EpisodeLog& log, double runtime_ms);

// realized = n_teach*c_skill + n_human*c_hum + n_pref*c_pref + n_robot*c_rob
//            + penalties, within kCostTol. Throws on violation.
void check_accounting(const EpisodeMetrics& m, const CostProfile& profile);

struct NamedProfile {
  std::string name;
  CostProfile profile;
};

// low / med / high presets (c_skill 50 / 100 / 200).
CostProfile profile_by_name(const std::string& name);

struct SuiteConfig {
  std::vector<NamedProfile> profiles;
  std::vector<std::string> algorithms;
  int32_t n_seeds = 30;
  uint64_t root_seed = 1;  // episode e uses scenario seed root_seed + e
  ScenarioConfig scenario;
  EpisodeOptions episode;
  PolicyConfigs policies;
  int32_t workers = 1;
  bool keep_logs = false;
};

struct SuiteRow {
  std::string profile;
  std::string algorithm;
  uint64_t seed = 0;
  int32_t episode = 0;
  EpisodeMetrics metrics;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;                  // ordered (profile, algorithm, episode)
  std::vector<EpisodeLog> logs;                // aligned with rows when keep_logs
  std::vector<Scenario> scenarios;             // per episode index
};

// Paired design: every (profile, algorithm) pair replays the same scenario
// for episode e. Results are independent of the worker count.
SuiteResult run_suite(const SuiteConfig& cfg);

struct Aggregate {
  std::string profile, algorithm;
  int32_t n = 0;
  double cost_mean = 0, cost_std = 0;
  double teach_mean = 0, human_mean = 0, pref_mean = 0, robot_mean = 0;
};

std::vector<Aggregate> aggregate(const std::vector<SuiteRow>& rows);

}  // namespace coil
