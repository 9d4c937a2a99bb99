#include "coil/domain.hpp"

#include <cmath>
#include <set>

namespace coil {

void PreferenceSpace::validate() const {
  if (params.empty()) throw DomainError("preference space is empty");
  std::set<std::string> uniq(params.begin(), params.end());
  if (uniq.size() != params.size()) throw DomainError("duplicate preference parameter");
}

void Belief::validate(int32_t pref_size) const {
  if (static_cast<int32_t>(probs.size()) != pref_size)
    throw DomainError("belief size does not match preference space");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw DomainError("belief probability out of range");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kCostTol) throw DomainError("belief does not sum to 1");
}

double Belief::entropy() const {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

void CostProfile::validate() const {
  for (double c : {c_rob, c_hum, c_pref, c_skill, c_skill_fail, c_pref_fail})
    if (!std::isfinite(c) || c < 0.0) throw DomainError("cost profile entry out of range");
}

void TeachModel::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("teach model requires alpha, beta > 0");
}

double teach_mean(const TeachModel& m) {
  m.validate();
  return m.alpha / (m.alpha + m.beta);
}

TeachModel teach_update(const TeachModel& m, bool success) {
  m.validate();
  return success ? TeachModel{m.alpha + 1.0, m.beta} : TeachModel{m.alpha, m.beta + 1.0};
}

double TeachBook::mean_for(int32_t variety) const {
  auto it = by_variety.find(variety);
  return teach_mean(it == by_variety.end() ? prior : it->second);
}

void TeachBook::update(int32_t variety, bool success) {
  auto it = by_variety.find(variety);
  const TeachModel& cur = it == by_variety.end() ? prior : it->second;
  by_variety[variety] = teach_update(cur, success);
}

double rho_safe(const Skill& skill, const TaskFeatures& task, int32_t theta) {
  return (skill.variety == task.variety && skill.trained_pref == theta) ? 1.0 : 0.0;
}

double expected_return(const Skill& skill, const TaskFeatures& task, int32_t theta,
                       const Belief& belief, double lambda_teach,
                       const CostProfile& profile) {
  double rho = rho_safe(skill, task, theta);
  double b = belief.probs.at(static_cast<size_t>(theta));
  return -(profile.c_skill_fail * (1.0 - lambda_teach * rho) +
           profile.c_pref_fail * (1.0 - b));
}

ThetaChoice best_theta(const Skill& skill, const TaskFeatures& task, const Belief& belief,
                       double lambda_teach, const CostProfile& profile,
                       const PreferenceSpace& prefs) {
  prefs.validate();
  belief.validate(prefs.size());
  ThetaChoice best{0, expected_return(skill, task, 0, belief, lambda_teach, profile)};
  for (int32_t t = 1; t < prefs.size(); ++t) {
    double v = expected_return(skill, task, t, belief, lambda_teach, profile);
    if (v > best.value + kCostTol) best = {t, v};
  }
  return best;
}

int32_t map_pref(const Belief& belief) {
  if (belief.probs.empty()) throw DomainError("empty belief");
  int32_t best = 0;
  for (int32_t t = 1; t < static_cast<int32_t>(belief.probs.size()); ++t)
    if (belief.probs[static_cast<size_t>(t)] > belief.probs[static_cast<size_t>(best)])
      best = t;
  return best;
}

std::vector<Belief> belief_update(const std::vector<Belief>& beliefs,
                                  const std::vector<TaskFeatures>& tasks,
                                  int32_t task_index, int32_t response) {
  if (beliefs.size() != tasks.size()) throw DomainError("beliefs/tasks size mismatch");
  if (task_index < 0 || task_index >= static_cast<int32_t>(tasks.size()))
    throw DomainError("task index out of range");
  auto n_theta = static_cast<int32_t>(beliefs[static_cast<size_t>(task_index)].probs.size());
  if (response < 0 || response >= n_theta) throw DomainError("response out of range");

  std::vector<Belief> out = beliefs;
  int32_t variety = tasks[static_cast<size_t>(task_index)].variety;
  for (size_t j = static_cast<size_t>(task_index); j < tasks.size(); ++j) {
    if (tasks[j].variety != variety) continue;
    // Delta likelihood: posterior mass concentrates on the response.
    if (out[j].probs.at(static_cast<size_t>(response)) <= 0.0)
      throw DegenerateBeliefError("response has zero prior mass at task " + std::to_string(j));
    std::fill(out[j].probs.begin(), out[j].probs.end(), 0.0);
    out[j].probs[static_cast<size_t>(response)] = 1.0;
  }
  return out;
}

}  // namespace coil
