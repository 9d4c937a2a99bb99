#include "coil/planner.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace coil {

std::string to_string(ActionType t) {
  switch (t) {
    case ActionType::ExecuteSkill: return "execute_skill";
    case ActionType::RequestSkill: return "request_skill";
    case ActionType::RequestHuman: return "request_human";
    case ActionType::RequestPref: return "request_pref";
  }
  return "?";
}

namespace {

// Best execution parameter for a skill that would be trained for this task's
// variety: the candidate skill is trained for the same theta it executes, so
// the safety term is constant and the preference term decides.
ThetaChoice best_theta_new_skill(int32_t variety, const TaskFeatures& task,
                                 const Belief& belief, double lambda,
                                 const CostProfile& profile, const PreferenceSpace& prefs) {
  ThetaChoice best{0, -std::numeric_limits<double>::max()};
  for (int32_t t = 0; t < prefs.size(); ++t) {
    double v = expected_return(Skill{variety, t}, task, t, belief, lambda, profile);
    if (v > best.value + kCostTol) best = {t, v};
  }
  return best;
}

}  // namespace

CompiledUfl build_ufl(const std::vector<TaskFeatures>& tasks,
                      const std::vector<Belief>& beliefs, int32_t start,
                      const SkillLibrary& library, const TeachBook& teach,
                      const CostProfile& profile, const PreferenceSpace& prefs,
                      std::optional<double> lambda_override) {
  if (start < 0 || start >= static_cast<int32_t>(tasks.size()))
    throw EmptyHorizonError("empty planning horizon");
  if (tasks.size() != beliefs.size()) throw DomainError("beliefs/tasks size mismatch");
  profile.validate();
  prefs.validate();
  for (const Belief& b : beliefs) b.validate(prefs.size());

  const auto n = static_cast<int32_t>(tasks.size());
  const int32_t m = n - start;
  CompiledUfl out;
  out.start = start;
  out.instance.n_demands = m;

  auto add_facility = [&](double open, FacilityRole role) {
    out.instance.open_costs.push_back(open);
    out.instance.edges.emplace_back();
    out.roles.push_back(role);
    return static_cast<int32_t>(out.instance.open_costs.size()) - 1;
  };

  for (int32_t i = start; i < n; ++i) {
    int32_t hf = add_facility(profile.c_hum, {FacilityRole::Human, i, -1});
    out.instance.edges[static_cast<size_t>(hf)].push_back({i - start, 0.0});

    double lambda = lambda_override ? *lambda_override
                                    : teach.mean_for(tasks[static_cast<size_t>(i)].variety);
    int32_t tf = add_facility(profile.c_skill, {FacilityRole::Teach, i, -1});
    for (int32_t j = i; j < n; ++j) {
      ThetaChoice tc = best_theta_new_skill(tasks[static_cast<size_t>(i)].variety,
                                            tasks[static_cast<size_t>(j)],
                                            beliefs[static_cast<size_t>(j)], lambda,
                                            profile, prefs);
      out.instance.edges[static_cast<size_t>(tf)].push_back(
          {j - start, profile.c_rob - tc.value});
    }
  }

  for (int32_t s = 0; s < static_cast<int32_t>(library.size()); ++s) {
    int32_t rf = add_facility(0.0, {FacilityRole::Robot, -1, s});
    for (int32_t j = start; j < n; ++j) {
      ThetaChoice tc = best_theta(library[static_cast<size_t>(s)],
                                  tasks[static_cast<size_t>(j)],
                                  beliefs[static_cast<size_t>(j)], 1.0, profile, prefs);
      out.instance.edges[static_cast<size_t>(rf)].push_back(
          {j - start, profile.c_rob - tc.value});
    }
  }
  return out;
}

Plan plan_known_prefs(const std::vector<TaskFeatures>& tasks,
                      const std::vector<Belief>& beliefs, int32_t start,
                      const SkillLibrary& library, const TeachBook& teach,
                      const CostProfile& profile, const PreferenceSpace& prefs,
                      PlanSolver solver, std::optional<double> lambda_override) {
  Plan p;
  p.compiled = build_ufl(tasks, beliefs, start, library, teach, profile, prefs,
                         lambda_override);
  p.solution = solver == PlanSolver::Greedy ? solve_greedy(p.compiled.instance)
                                            : solve_exact(p.compiled.instance);
  p.expected_cost = p.solution.total_cost;
  p.baseline_cost = p.solution.total_cost;
  p.n_solves = 1;

  const auto n = static_cast<int32_t>(tasks.size());
  for (int32_t j = start; j < n; ++j) {
    int32_t fac = p.solution.assignment[static_cast<size_t>(j - start)];
    const FacilityRole& role = p.compiled.roles[static_cast<size_t>(fac)];
    InteractionAction a;
    a.task_index = j;
    switch (role.kind) {
      case FacilityRole::Human:
        a.type = ActionType::RequestHuman;
        break;
      case FacilityRole::Teach: {
        double lambda = lambda_override
                            ? *lambda_override
                            : teach.mean_for(tasks[static_cast<size_t>(role.task_index)].variety);
        ThetaChoice tc = best_theta_new_skill(
            tasks[static_cast<size_t>(role.task_index)].variety, tasks[static_cast<size_t>(j)],
            beliefs[static_cast<size_t>(j)], lambda, profile, prefs);
        if (role.task_index == j) {
          a.type = ActionType::RequestSkill;
          a.theta = tc.theta;
        } else {
          a.type = ActionType::ExecuteSkill;
          a.theta = tc.theta;
          a.taught_at = role.task_index;
        }
        break;
      }
      case FacilityRole::Robot: {
        ThetaChoice tc = best_theta(library[static_cast<size_t>(role.library_index)],
                                    tasks[static_cast<size_t>(j)],
                                    beliefs[static_cast<size_t>(j)], 1.0, profile, prefs);
        a.type = ActionType::ExecuteSkill;
        a.theta = tc.theta;
        a.skill_ref = role.library_index;
        break;
      }
    }
    p.per_task.push_back(a);
  }
  return p;
}

Plan plan(const std::vector<TaskFeatures>& tasks, const std::vector<Belief>& beliefs,
          int32_t start, const SkillLibrary& library, const TeachBook& teach,
          const CostProfile& profile, const PreferenceSpace& prefs, PlanSolver solver,
          std::optional<double> lambda_override) {
  Plan base = plan_known_prefs(tasks, beliefs, start, library, teach, profile, prefs,
                               solver, lambda_override);
  const Belief& b1 = beliefs[static_cast<size_t>(start)];

  double jbar = 0.0;
  double mass = 0.0;
  int32_t solves = base.n_solves;
  for (int32_t theta = 0; theta < prefs.size(); ++theta) {
    double w = b1.probs[static_cast<size_t>(theta)];
    mass += w;
    if (w <= 0.0) continue;  // zero-mass responses contribute nothing
    std::vector<Belief> hyp = belief_update(beliefs, tasks, start, theta);
    Plan p = plan_known_prefs(tasks, hyp, start, library, teach, profile, prefs, solver,
                              lambda_override);
    jbar += w * p.expected_cost;
    solves += p.n_solves;
  }
  base.n_solves = solves;

  double lhs = profile.c_pref + jbar / mass;
  if (lhs <= base.expected_cost + kCostTol) {
    base.pref_first = true;
    base.expected_cost = lhs;
  }
  return base;
}

namespace {

std::string action_signature(const InteractionAction& a) {
  return to_string(a.type) + ":" + std::to_string(a.task_index) + ":" +
         std::to_string(a.theta) + ":" + std::to_string(a.skill_ref);
}

}  // namespace

EpisodeLog run_interaction(const std::vector<TaskFeatures>& tasks,
                           const PreferenceSpace& prefs, const CostProfile& profile,
                           Oracle& oracle, Policy& policy, const EpisodeOptions& opts) {
  if (tasks.empty()) return {};
  prefs.validate();
  profile.validate();
  opts.teach_prior.validate();

  EpisodeState st;
  st.tasks = &tasks;
  st.prefs = prefs;
  st.profile = profile;
  st.teach.prior = opts.teach_prior;
  st.beliefs.assign(tasks.size(),
                    Belief{std::vector<double>(static_cast<size_t>(prefs.size()),
                                               1.0 / prefs.size())});

  EpisodeLog log;
  std::map<std::string, int32_t> repeats;  // since last planner-visible state change

  auto charge = [&](StepRecord& rec, double amount) {
    rec.charged = amount;
    log.total_cost += amount;
  };

  while (st.current < st.n_tasks()) {
    InteractionAction act = policy.decide(st);
    if (act.task_index != st.current)
      throw NonTerminationError("policy acted on task " + std::to_string(act.task_index) +
                                " instead of " + std::to_string(st.current));

    StepRecord rec;
    rec.step = static_cast<int32_t>(log.steps.size());
    rec.task_index = st.current;
    rec.action = act;
    rec.meta = policy.last_meta();
    int32_t variety = tasks[static_cast<size_t>(st.current)].variety;
    rec.lambda_teach = st.teach.mean_for(variety);
    rec.belief_entropy = st.beliefs[static_cast<size_t>(st.current)].entropy();
    if (log.steps.empty()) log.planned_cost_initial = rec.meta.expected_cost;

    bool state_changed = false;
    switch (act.type) {
      case ActionType::RequestPref: {
        charge(rec, profile.c_pref);
        ++log.n_pref;
        int32_t response = oracle.answer_pref(st.current);
        auto updated = belief_update(st.beliefs, tasks, st.current, response);
        state_changed = updated != st.beliefs;
        st.beliefs = std::move(updated);
        rec.outcome = "pref_response:" + std::to_string(response);
        break;
      }
      case ActionType::RequestHuman: {
        charge(rec, profile.c_hum);
        ++log.n_human;
        ++st.current;
        rec.outcome = "ok";
        state_changed = true;
        break;
      }
      case ActionType::RequestSkill: {
        charge(rec, profile.c_skill);
        ++log.n_teach;
        bool ok = oracle.teach_attempt(st.current);
        // A posterior update alone does not reset the loop guard: a policy
        // that keeps re-asking for the same demo while lambda drifts toward
        // zero is exactly the livelock the guard exists to cut off.
        if (policy.uses_teach_feedback()) st.teach.update(variety, ok);
        if (ok) {
          st.library.push_back(Skill{variety, act.theta});
          state_changed = true;
        }
        rec.outcome = ok ? "teach_success" : "teach_failure";
        break;
      }
      case ActionType::ExecuteSkill: {
        if (act.skill_ref < 0 || act.skill_ref >= static_cast<int32_t>(st.library.size()))
          throw NonTerminationError("execution references a skill outside the library");
        charge(rec, profile.c_rob);
        ++log.n_robot;
        auto out = oracle.judge_execution(st.current,
                                          st.library[static_cast<size_t>(act.skill_ref)],
                                          act.theta);
        rec.penalty = (out.variety_mismatch ? profile.c_skill_fail : 0.0) +
                      (out.pref_mismatch ? profile.c_pref_fail : 0.0);
        log.total_cost += rec.penalty;
        log.penalty_total += rec.penalty;
        ++st.current;
        rec.outcome = "ok";
        state_changed = true;
        break;
      }
    }
    log.steps.push_back(rec);

    if (state_changed) {
      repeats.clear();
    } else {
      int32_t& count = repeats[action_signature(act)];
      if (++count > opts.guard_limit) {
        if (opts.guard_mode == GuardMode::Abort)
          throw NonTerminationError("action repeated " + std::to_string(count) +
                                    " times with no state change at task " +
                                    std::to_string(st.current));
        StepRecord del;
        del.step = static_cast<int32_t>(log.steps.size());
        del.task_index = st.current;
        del.action = {ActionType::RequestHuman, st.current, -1, -1, -1};
        del.forced = true;
        del.outcome = "ok";
        del.lambda_teach = st.teach.mean_for(variety);
        del.belief_entropy = st.beliefs[static_cast<size_t>(st.current)].entropy();
        charge(del, profile.c_hum);
        ++log.n_human;
        ++st.current;
        log.steps.push_back(del);
        repeats.clear();
      }
    }
  }
  return log;
}

double synthetic_plan_ms(int32_t n_tasks, int32_t k_prefs, int32_t reps) {
  PreferenceSpace prefs;
  for (int32_t g = 0; g < k_prefs; ++g) prefs.params.push_back("goal-" + std::to_string(g));
  std::vector<TaskFeatures> tasks;
  std::vector<Belief> beliefs;
  for (int32_t i = 0; i < n_tasks; ++i) {
    TaskFeatures t;
    t.variety = i % 9;
    tasks.push_back(t);
    beliefs.push_back(Belief{std::vector<double>(static_cast<size_t>(k_prefs),
                                                 1.0 / k_prefs)});
  }
  CostProfile profile{10, 80, 20, 100, 100, 100};
  SkillLibrary lib;
  TeachBook teach;

  std::vector<double> times;
  for (int32_t r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    Plan p = plan(tasks, beliefs, 0, lib, teach, profile, prefs);
    auto t1 = std::chrono::steady_clock::now();
    if (p.per_task.empty()) throw DomainError("synthetic plan produced nothing");
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

}  // namespace coil
