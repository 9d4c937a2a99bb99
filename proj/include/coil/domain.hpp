#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coil {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateBeliefError : DomainError {
  using DomainError::DomainError;
};

constexpr double kCostTol = 1e-9;

// Tasks are equivalent for skill reuse and belief propagation exactly when
// their variety ids match (here: same object type and color).
struct TaskFeatures {
  int32_t variety = 0;
  std::string object_type;
  std::string color;
  std::optional<std::pair<int32_t, int32_t>> position;  // informational only
};

// Ordered discrete preference parameters (goal identifiers); a theta is an
// index into params.
struct PreferenceSpace {
  std::vector<std::string> params;

  int32_t size() const { return static_cast<int32_t>(params.size()); }
  void validate() const;
};

struct Belief {
  std::vector<double> probs;

  void validate(int32_t pref_size) const;  // non-negative, sums to 1 within 1e-9
  double entropy() const;                  // natural log
  bool operator==(const Belief&) const = default;
};

struct CostProfile {
  double c_rob = 0.0;
  double c_hum = 0.0;
  double c_pref = 0.0;
  double c_skill = 0.0;
  double c_skill_fail = 0.0;
  double c_pref_fail = 0.0;

  void validate() const;  // all finite and >= 0
};

struct Skill {
  int32_t variety = 0;
  int32_t trained_pref = 0;
};

using SkillLibrary = std::vector<Skill>;

// Beta posterior over teach success for one variety; mean = alpha/(alpha+beta).
struct TeachModel {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;  // both strictly positive
};

double teach_mean(const TeachModel& m);
TeachModel teach_update(const TeachModel& m, bool success);

// Per-variety teach posteriors with a shared prior for unseen varieties.
struct TeachBook {
  TeachModel prior{1.0, 1.0};
  std::map<int32_t, TeachModel> by_variety;

  double mean_for(int32_t variety) const;
  void update(int32_t variety, bool success);
};

// 1 when the skill was trained for this exact variety and theta, else 0.
double rho_safe(const Skill& skill, const TaskFeatures& task, int32_t theta);

// Expected return of executing `skill` on `task` with parameter `theta`:
//   -[c_skill_fail * (1 - lambda_teach * rho_safe) + c_pref_fail * (1 - b(theta))]
// Always in [-(c_skill_fail + c_pref_fail), 0].
double expected_return(const Skill& skill, const TaskFeatures& task, int32_t theta,
                       const Belief& belief, double lambda_teach,
                       const CostProfile& profile);

struct ThetaChoice {
  int32_t theta = 0;
  double value = 0.0;
};

// Maximizes expected_return over theta; ties resolve to the earliest theta in
// the preference space ordering.
ThetaChoice best_theta(const Skill& skill, const TaskFeatures& task, const Belief& belief,
                       double lambda_teach, const CostProfile& profile,
                       const PreferenceSpace& prefs);

// Highest-probability theta, ties to the earliest index.
int32_t map_pref(const Belief& belief);

// Collapse the queried task's belief onto `response` (delta likelihood) and
// propagate to every future task with the same variety. Past tasks keep their
// beliefs. Throws DegenerateBeliefError when the response has zero prior mass.
std::vector<Belief> belief_update(const std::vector<Belief>& beliefs,
                                  const std::vector<TaskFeatures>& tasks,
                                  int32_t task_index, int32_t response);

}  // namespace coil
