#include "coil/gridworld.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coil {

namespace {

const char* kTypes[] = {"mug",  "plate", "bowl", "cup", "jar",  "pan",
                        "tray", "fork",  "pot",  "box", "bottle", "cap"};
const char* kColors[] = {"red", "green", "blue", "yellow", "white", "black"};

// Raw-engine draws; std distributions are not bit-stable across libraries.
uint64_t draw_u64(std::mt19937_64& rng, uint64_t n) {
  uint64_t lim = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % n;
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_tasks < 0) throw BadConfigError("scenario.n_tasks must be >= 0");
  if (n_varieties < 1) throw BadConfigError("scenario.n_varieties must be >= 1");
  if (n_goals < 1) throw BadConfigError("scenario.n_goals must be >= 1");
  if (grid_size < 1) throw BadConfigError("scenario.grid_size must be >= 1");
  if (!(challenging_frac >= 0.0 && challenging_frac <= 1.0))
    throw BadConfigError("scenario.challenging_frac must be in [0, 1]");
  if (!frequency_weights.empty()) {
    if (static_cast<int32_t>(frequency_weights.size()) != n_varieties)
      throw BadConfigError("scenario.frequency_weights size must equal n_varieties");
    for (double w : frequency_weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw BadConfigError("scenario.frequency_weights entries must be positive");
  }
}

int32_t challenging_count(double frac, int32_t n_varieties) {
  return static_cast<int32_t>(std::floor(frac * n_varieties + 0.5));
}

Scenario generate_scenario(uint64_t seed, const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(seed);

  Scenario sc;
  sc.seed = seed;
  sc.grid_size = cfg.grid_size;

  // Near-square type x color layout, e.g. 9 -> 3x3, 12 -> 4x3.
  auto n_types = static_cast<int32_t>(std::ceil(std::sqrt(double(cfg.n_varieties))));
  int32_t n_colors = (cfg.n_varieties + n_types - 1) / n_types;
  if (n_types > static_cast<int32_t>(std::size(kTypes)) ||
      n_colors > static_cast<int32_t>(std::size(kColors)))
    throw BadConfigError("scenario.n_varieties exceeds the naming palette");
  for (int32_t v = 0; v < cfg.n_varieties; ++v)
    sc.varieties.push_back({v, kTypes[v / n_colors], kColors[v % n_colors]});

  for (int32_t g = 0; g < cfg.n_goals; ++g)
    sc.goals.params.push_back("goal-" + std::to_string(g));

  for (int32_t v = 0; v < cfg.n_varieties; ++v)
    sc.hidden_prefs.push_back(
        static_cast<int32_t>(draw_u64(rng, static_cast<uint64_t>(cfg.n_goals))));

  // Challenging varieties: partial Fisher-Yates, without replacement.
  int32_t n_chal = challenging_count(cfg.challenging_frac, cfg.n_varieties);
  std::vector<int32_t> ids(static_cast<size_t>(cfg.n_varieties));
  for (int32_t v = 0; v < cfg.n_varieties; ++v) ids[static_cast<size_t>(v)] = v;
  for (int32_t k = 0; k < n_chal; ++k) {
    auto pick = k + static_cast<int32_t>(
                        draw_u64(rng, static_cast<uint64_t>(cfg.n_varieties - k)));
    std::swap(ids[static_cast<size_t>(k)], ids[static_cast<size_t>(pick)]);
    sc.challenging.insert(ids[static_cast<size_t>(k)]);
  }

  std::vector<double> cum;
  if (!cfg.frequency_weights.empty()) {
    double total = 0.0;
    for (double w : cfg.frequency_weights) cum.push_back(total += w);
  }
  for (int32_t t = 0; t < cfg.n_tasks; ++t) {
    int32_t v;
    if (cum.empty()) {
      v = static_cast<int32_t>(draw_u64(rng, static_cast<uint64_t>(cfg.n_varieties)));
    } else {
      double r = draw_unit(rng) * cum.back();
      v = static_cast<int32_t>(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
      v = std::min(v, cfg.n_varieties - 1);
    }
    TaskFeatures task;
    task.variety = v;
    task.object_type = sc.varieties[static_cast<size_t>(v)].object_type;
    task.color = sc.varieties[static_cast<size_t>(v)].color;
    auto x = static_cast<int32_t>(draw_u64(rng, static_cast<uint64_t>(cfg.grid_size)));
    auto y = static_cast<int32_t>(draw_u64(rng, static_cast<uint64_t>(cfg.grid_size)));
    task.position = {x, y};
    sc.sequence.push_back(task);
  }
  return sc;
}

int32_t GridOracle::answer_pref(int32_t task_index) {
  return sc_->hidden_prefs.at(
      static_cast<size_t>(sc_->sequence.at(static_cast<size_t>(task_index)).variety));
}

bool GridOracle::teach_attempt(int32_t task_index) {
  int32_t v = sc_->sequence.at(static_cast<size_t>(task_index)).variety;
  return sc_->challenging.count(v) == 0;
}

Oracle::ExecOutcome GridOracle::judge_execution(int32_t task_index, const Skill& skill,
                                                int32_t theta) {
  int32_t v = sc_->sequence.at(static_cast<size_t>(task_index)).variety;
  ExecOutcome out;
  out.variety_mismatch = skill.variety != v;
  out.pref_mismatch = theta != sc_->hidden_prefs.at(static_cast<size_t>(v));
  return out;
}

EpisodeMetrics metrics_from_log(const EpisodeLog& log, double runtime_ms) {
  EpisodeMetrics m;
  m.n_teach = log.n_teach;
  m.n_human = log.n_human;
  m.n_pref = log.n_pref;
  m.n_robot = log.n_robot;
  m.realized_cost = log.total_cost;
  m.penalty_total = log.penalty_total;
  m.planned_cost_initial = log.planned_cost_initial;
  m.runtime_ms = runtime_ms;
  return m;
}

void check_accounting(const EpisodeMetrics& m, const CostProfile& profile) {
  double expect = m.n_teach * profile.c_skill + m.n_human * profile.c_hum +
                  m.n_pref * profile.c_pref + m.n_robot * profile.c_rob +
                  m.penalty_total;
  if (std::fabs(expect - m.realized_cost) > kCostTol)
    throw DomainError("episode accounting identity violated");
}

CostProfile profile_by_name(const std::string& name) {
  CostProfile p;
  p.c_rob = 10;
  p.c_hum = 80;
  p.c_pref = 20;
  p.c_skill_fail = 100;
  p.c_pref_fail = 100;
  if (name == "low") {
    p.c_skill = 50;
  } else if (name == "med") {
    p.c_skill = 100;
  } else if (name == "high") {
    p.c_skill = 200;
  } else {
    throw BadConfigError("unknown cost profile: " + name);
  }
  return p;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  cfg.scenario.validate();
  if (cfg.n_seeds < 0) throw BadConfigError("suite.n_seeds must be >= 0");
  if (cfg.workers < 1) throw BadConfigError("suite.workers must be >= 1");
  for (const auto& a : cfg.algorithms)
    if (!make_policy(a, cfg.policies)) throw BadConfigError("unknown algorithm: " + a);
  for (const auto& p : cfg.profiles) p.profile.validate();

  SuiteResult res;
  res.scenarios.reserve(static_cast<size_t>(cfg.n_seeds));
  for (int32_t e = 0; e < cfg.n_seeds; ++e)
    res.scenarios.push_back(
        generate_scenario(cfg.root_seed + static_cast<uint64_t>(e), cfg.scenario));

  struct Job {
    size_t profile_idx, algo_idx;
    int32_t episode;
  };
  std::vector<Job> jobs;
  for (size_t pi = 0; pi < cfg.profiles.size(); ++pi)
    for (size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
      for (int32_t e = 0; e < cfg.n_seeds; ++e) jobs.push_back({pi, ai, e});

  res.rows.resize(jobs.size());
  if (cfg.keep_logs) res.logs.resize(jobs.size());
  std::vector<std::string> errors(jobs.size());

  auto run_job_inner = [&](size_t j) {
    const Job& job = jobs[j];
    const Scenario& sc = res.scenarios[static_cast<size_t>(job.episode)];
    auto policy = make_policy(cfg.algorithms[job.algo_idx], cfg.policies);
    GridOracle oracle(sc);

    auto t0 = std::chrono::steady_clock::now();
    EpisodeLog log = run_interaction(sc.sequence, sc.goals,
                                     cfg.profiles[job.profile_idx].profile, oracle,
                                     *policy, cfg.episode);
    auto t1 = std::chrono::steady_clock::now();

    SuiteRow row;
    row.profile = cfg.profiles[job.profile_idx].name;
    row.algorithm = cfg.algorithms[job.algo_idx];
    row.seed = sc.seed;
    row.episode = job.episode;
    row.metrics = metrics_from_log(
        log, std::chrono::duration<double, std::milli>(t1 - t0).count());
    check_accounting(row.metrics, cfg.profiles[job.profile_idx].profile);
    res.rows[j] = row;
    if (cfg.keep_logs) res.logs[j] = std::move(log);
  };
  // Exceptions must not unwind across the parallel region.
  auto run_job = [&](size_t j) {
    try {
      run_job_inner(j);
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(cfg.workers) if (cfg.workers > 1)
  for (int64_t j = 0; j < static_cast<int64_t>(jobs.size()); ++j)
    run_job(static_cast<size_t>(j));
#else
  for (size_t j = 0; j < jobs.size(); ++j) run_job(j);
#endif
  for (size_t j = 0; j < jobs.size(); ++j)
    if (!errors[j].empty())
      throw DomainError("episode " + std::to_string(jobs[j].episode) + " (" +
                        cfg.algorithms[jobs[j].algo_idx] + ", " +
                        cfg.profiles[jobs[j].profile_idx].name + "): " + errors[j]);
  return res;
}

std::vector<Aggregate> aggregate(const std::vector<SuiteRow>& rows) {
  std::vector<Aggregate> out;
  auto find = [&](const std::string& p, const std::string& a) -> Aggregate& {
    for (auto& g : out)
      if (g.profile == p && g.algorithm == a) return g;
    out.push_back({p, a, 0, 0, 0, 0, 0, 0, 0});
    return out.back();
  };
  for (const SuiteRow& r : rows) {
    Aggregate& g = find(r.profile, r.algorithm);
    ++g.n;
    g.cost_mean += r.metrics.realized_cost;
    g.teach_mean += r.metrics.n_teach;
    g.human_mean += r.metrics.n_human;
    g.pref_mean += r.metrics.n_pref;
    g.robot_mean += r.metrics.n_robot;
  }
  for (auto& g : out) {
    if (g.n == 0) continue;
    g.cost_mean /= g.n;
    g.teach_mean /= g.n;
    g.human_mean /= g.n;
    g.pref_mean /= g.n;
    g.robot_mean /= g.n;
  }
  for (auto& g : out) {
    double ss = 0.0;
    for (const SuiteRow& r : rows)
      if (r.profile == g.profile && r.algorithm == g.algorithm)
        ss += (r.metrics.realized_cost - g.cost_mean) *
              (r.metrics.realized_cost - g.cost_mean);
    g.cost_std = g.n > 1 ? std::sqrt(ss / (g.n - 1)) : 0.0;
  }
  return out;
}

}  // namespace coil
