#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coil/domain.hpp"
#include "coil/ufl.hpp"

namespace coil {

struct EmptyHorizonError : DomainError {
  using DomainError::DomainError;
};
struct NonTerminationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ActionType { ExecuteSkill, RequestSkill, RequestHuman, RequestPref };

std::string to_string(ActionType t);

struct InteractionAction {
  ActionType type = ActionType::RequestHuman;
  int32_t task_index = 0;  // absolute episode index
  int32_t theta = -1;      // execution / training parameter
  int32_t skill_ref = -1;  // library index when executing an existing skill
  int32_t taught_at = -1;  // plan-only: task whose pending skill would serve this

  bool operator==(const InteractionAction&) const = default;
};

// Facility layout of a compiled instance. Per horizon task i, a human
// facility (serves only i, open c_hum) and a teach facility (serves j >= i,
// open c_skill); plus one zero-cost robot facility per library skill.
struct FacilityRole {
  enum Kind { Human, Teach, Robot } kind = Human;
  int32_t task_index = -1;     // Human/Teach
  int32_t library_index = -1;  // Robot
};

struct CompiledUfl {
  UflInstance instance;
  std::vector<FacilityRole> roles;
  int32_t start = 0;  // demand d corresponds to task start + d
};

CompiledUfl build_ufl(const std::vector<TaskFeatures>& tasks,
                      const std::vector<Belief>& beliefs, int32_t start,
                      const SkillLibrary& library, const TeachBook& teach,
                      const CostProfile& profile, const PreferenceSpace& prefs,
                      std::optional<double> lambda_override = std::nullopt);

enum class PlanSolver { Greedy, Exact };

struct Plan {
  std::vector<InteractionAction> per_task;  // aligned with horizon tasks
  double expected_cost = 0.0;               // J, or the pref-branch expectation
  double baseline_cost = 0.0;               // J of the known-prefs plan
  bool pref_first = false;
  int32_t n_solves = 0;
  UflSolution solution;
  CompiledUfl compiled;
};

// Compile + solve + decode for fixed beliefs (no preference queries).
Plan plan_known_prefs(const std::vector<TaskFeatures>& tasks,
                      const std::vector<Belief>& beliefs, int32_t start,
                      const SkillLibrary& library, const TeachBook& teach,
                      const CostProfile& profile, const PreferenceSpace& prefs,
                      PlanSolver solver = PlanSolver::Greedy,
                      std::optional<double> lambda_override = std::nullopt);

// Adds the preference-query branch: for each theta, hypothetically collapse
// the first task's belief, re-plan, and average. Requests a preference when
// c_pref + avg <= J (within kCostTol).
Plan plan(const std::vector<TaskFeatures>& tasks, const std::vector<Belief>& beliefs,
          int32_t start, const SkillLibrary& library, const TeachBook& teach,
          const CostProfile& profile, const PreferenceSpace& prefs,
          PlanSolver solver = PlanSolver::Greedy,
          std::optional<double> lambda_override = std::nullopt);

// Environment answers; implementations must be deterministic.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual int32_t answer_pref(int32_t task_index) = 0;
  virtual bool teach_attempt(int32_t task_index) = 0;
  struct ExecOutcome {
    bool variety_mismatch = false;
    bool pref_mismatch = false;
  };
  virtual ExecOutcome judge_execution(int32_t task_index, const Skill& skill,
                                      int32_t theta) = 0;
};

struct EpisodeState {
  const std::vector<TaskFeatures>* tasks = nullptr;
  PreferenceSpace prefs;
  CostProfile profile;
  std::vector<Belief> beliefs;
  SkillLibrary library;
  TeachBook teach;
  int32_t current = 0;

  int32_t n_tasks() const { return static_cast<int32_t>(tasks->size()); }
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual InteractionAction decide(const EpisodeState& st) = 0;
  // COIL-NoAdapt freezes its teach posteriors; everyone else learns.
  virtual bool uses_teach_feedback() const { return true; }

  struct DecisionMeta {
    double expected_cost = std::numeric_limits<double>::quiet_NaN();
    double pref_lhs = std::numeric_limits<double>::quiet_NaN();
    double pref_rhs = std::numeric_limits<double>::quiet_NaN();
  };
  virtual DecisionMeta last_meta() const { return {}; }
};

struct StepRecord {
  int32_t step = 0;
  int32_t task_index = 0;
  InteractionAction action;
  std::string outcome;  // ok | teach_success | teach_failure | pref_response:<k>
  bool forced = false;  // guard-forced human delegation
  double charged = 0.0;
  double penalty = 0.0;
  double lambda_teach = 1.0;
  double belief_entropy = 0.0;
  Policy::DecisionMeta meta;
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  double total_cost = 0.0;
  double penalty_total = 0.0;
  int32_t n_teach = 0, n_human = 0, n_pref = 0, n_robot = 0;
  double planned_cost_initial = std::numeric_limits<double>::quiet_NaN();
};

enum class GuardMode { Delegate, Abort };

struct EpisodeOptions {
  int32_t guard_limit = 25;
  GuardMode guard_mode = GuardMode::Delegate;
  TeachModel teach_prior{1.0, 1.0};
};

// Shared executor: replans through `policy` after every event, charges the
// profile costs, applies oracle outcomes, and guards against action loops
// that change no planner-visible state.
EpisodeLog run_interaction(const std::vector<TaskFeatures>& tasks,
                           const PreferenceSpace& prefs, const CostProfile& profile,
                           Oracle& oracle, Policy& policy, const EpisodeOptions& opts);

// Median wall time of plan() on a synthetic horizon (n tasks cycling over 9
// varieties, k preference goals, uniform beliefs, empty library).
double synthetic_plan_ms(int32_t n_tasks, int32_t k_prefs, int32_t reps);

}  // namespace coil
