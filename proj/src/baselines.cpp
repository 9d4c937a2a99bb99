#include "coil/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace coil {

namespace {

InteractionAction plan_first_action(const Plan& p, const EpisodeState& st) {
  if (p.pref_first) return {ActionType::RequestPref, st.current, -1, -1, -1};
  return p.per_task.front();
}

Policy::DecisionMeta meta_from(const Plan& p) {
  Policy::DecisionMeta m;
  m.expected_cost = p.expected_cost;
  if (p.pref_first) {
    m.pref_lhs = p.expected_cost;
    m.pref_rhs = p.baseline_cost;
  }
  return m;
}

// Highest-rho library skill for (task, theta); ties to the lowest index.
std::pair<int32_t, double> best_library_skill(const EpisodeState& st,
                                              const TaskFeatures& task, int32_t theta) {
  int32_t best = -1;
  double best_rho = 0.0;
  for (int32_t s = 0; s < static_cast<int32_t>(st.library.size()); ++s) {
    double r = rho_safe(st.library[static_cast<size_t>(s)], task, theta);
    if (best < 0 || r > best_rho) {
      best = s;
      best_rho = r;
      if (r >= 1.0) break;
    }
  }
  return {best, best < 0 ? 0.0 : best_rho};
}

}  // namespace

InteractionAction CoilPolicy::decide(const EpisodeState& st) {
  Plan p = plan(*st.tasks, st.beliefs, st.current, st.library, st.teach, st.profile,
                st.prefs, solver_);
  meta_ = meta_from(p);
  return plan_first_action(p, st);
}

InteractionAction coil_noadapt_step(const EpisodeState& st, PlanSolver solver) {
  Plan p = plan(*st.tasks, st.beliefs, st.current, st.library, st.teach, st.profile,
                st.prefs, solver, 1.0);
  return plan_first_action(p, st);
}

InteractionAction NoAdaptPolicy::decide(const EpisodeState& st) {
  Plan p = plan(*st.tasks, st.beliefs, st.current, st.library, st.teach, st.profile,
                st.prefs, solver_, 1.0);
  meta_ = meta_from(p);
  return plan_first_action(p, st);
}

InteractionAction cadl_step(const EpisodeState& st, const CadlConfig& cfg) {
  const Belief& b = st.beliefs[static_cast<size_t>(st.current)];
  double peak = *std::max_element(b.probs.begin(), b.probs.end());
  if (peak < cfg.alpha) return {ActionType::RequestPref, st.current, -1, -1, -1};

  std::vector<Belief> deltas = st.beliefs;
  for (Belief& d : deltas) {
    int32_t m = map_pref(d);
    std::fill(d.probs.begin(), d.probs.end(), 0.0);
    d.probs[static_cast<size_t>(m)] = 1.0;
  }
  Plan p = plan_known_prefs(*st.tasks, deltas, st.current, st.library, st.teach,
                            st.profile, st.prefs, PlanSolver::Greedy, 1.0);
  return p.per_task.front();
}

InteractionAction CadlPolicy::decide(const EpisodeState& st) {
  InteractionAction a = cadl_step(st, cfg_);
  meta_ = {};
  return a;
}

InteractionAction ig_step(const EpisodeState& st, const IgConfig& cfg) {
  const auto n = static_cast<int32_t>(st.tasks->size());
  const int32_t i = st.current;
  const TaskFeatures& task = (*st.tasks)[static_cast<size_t>(i)];
  const Belief& b = st.beliefs[static_cast<size_t>(i)];
  const double beta = cfg.beta_scale;
  int32_t theta_map = map_pref(b);
  auto [ref_skill, rho_hat] = best_library_skill(st, task, theta_map);

  double h_i = b.entropy();
  double h_rest = 0.0, h_same = 0.0;
  for (int32_t j = i; j < n; ++j) {
    double h = st.beliefs[static_cast<size_t>(j)].entropy();
    h_rest += h;
    if ((*st.tasks)[static_cast<size_t>(j)].variety == task.variety) h_same += h;
  }

  double best_score = -std::numeric_limits<double>::max();
  InteractionAction best_action{ActionType::RequestHuman, i, -1, -1, -1};

  // Preference query. A query whose response collapses the same-variety
  // beliefs: skipped entirely once the current belief is already certain.
  if (h_i > kCostTol) {
    double gain = cfg.entropy_mode == IgConfig::EntropyMode::Reduction
                      ? h_same
                      : (h_rest - h_same) - h_i;
    double score = gain - beta * st.profile.c_pref;
    if (score > best_score + kCostTol) {
      best_score = score;
      best_action = {ActionType::RequestPref, i, -1, -1, -1};
    }
  }

  // Skill query: optimistic execution-safety gain of adding a skill for this
  // variety trained at the best single parameter g.
  {
    double sg = 0.0;
    int32_t g_best = 0;
    for (int32_t g = 0; g < st.prefs.size(); ++g) {
      double total = 0.0;
      for (int32_t j = i; j < n; ++j) {
        const TaskFeatures& tj = (*st.tasks)[static_cast<size_t>(j)];
        if (tj.variety != task.variety) continue;
        double old_rho = best_library_skill(st, tj, g).second;
        total += st.beliefs[static_cast<size_t>(j)].probs[static_cast<size_t>(g)] *
                 (1.0 - old_rho);
      }
      if (total > sg + kCostTol) {
        sg = total;
        g_best = g;
      }
    }
    // The failure term is priced with the post-demo library (the same
    // optimistic update SG uses), where the fresh skill is safe on this
    // task by construction, so it contributes nothing.
    double cost = st.profile.c_skill + st.profile.c_rob;
    double score = sg - beta * cost;
    if (score > best_score + kCostTol) {
      best_score = score;
      best_action = {ActionType::RequestSkill, i, g_best, -1, -1};
    }
  }

  // Robot execution with the best existing skill.
  if (ref_skill >= 0) {
    double cost = st.profile.c_rob + st.profile.c_skill_fail * (1.0 - rho_hat) +
                  st.profile.c_pref_fail *
                      (1.0 - b.probs[static_cast<size_t>(theta_map)]);
    double score = -beta * cost;
    if (score > best_score + kCostTol) {
      best_score = score;
      best_action = {ActionType::ExecuteSkill, i, theta_map, ref_skill, -1};
    }
  }

  // Human delegation.
  {
    double score = -beta * st.profile.c_hum;
    if (score > best_score + kCostTol) {
      best_score = score;
      best_action = {ActionType::RequestHuman, i, -1, -1, -1};
    }
  }
  return best_action;
}

InteractionAction cba_step(const EpisodeState& st, const CbaConfig& cfg) {
  const Belief& b = st.beliefs[static_cast<size_t>(st.current)];
  double peak = *std::max_element(b.probs.begin(), b.probs.end());
  if (peak < cfg.alpha) return {ActionType::RequestPref, st.current, -1, -1, -1};

  const TaskFeatures& task = (*st.tasks)[static_cast<size_t>(st.current)];
  int32_t theta = map_pref(b);
  auto [ref_skill, rho_hat] = best_library_skill(st, task, theta);
  if (rho_hat <= cfg.alpha) return {ActionType::RequestSkill, st.current, theta, -1, -1};
  return {ActionType::ExecuteSkill, st.current, theta, ref_skill, -1};
}

std::unique_ptr<Policy> make_policy(const std::string& name, const PolicyConfigs& cfgs) {
  if (name == "coil") return std::make_unique<CoilPolicy>(cfgs.solver);
  if (name == "coil-noadapt") return std::make_unique<NoAdaptPolicy>(cfgs.solver);
  if (name == "cadl") return std::make_unique<CadlPolicy>(cfgs.cadl);
  if (name == "ig") return std::make_unique<IgPolicy>(cfgs.ig);
  if (name == "cba") return std::make_unique<CbaPolicy>(cfgs.cba);
  return nullptr;
}

}  // namespace coil
