#pragma once

#include <memory>
#include <optional>
#include <string>

#include "coil/planner.hpp"

namespace coil {

// COIL itself: replans with plan() over the remaining horizon every step.
class CoilPolicy : public Policy {
 public:
  explicit CoilPolicy(PlanSolver solver = PlanSolver::Greedy) : solver_(solver) {}
  std::string name() const override { return "coil"; }
  InteractionAction decide(const EpisodeState& st) override;
  DecisionMeta last_meta() const override { return meta_; }

 private:
  PlanSolver solver_;
  DecisionMeta meta_;
};

// COIL with teach feasibility pinned to 1 and teach feedback ignored.
class NoAdaptPolicy : public Policy {
 public:
  explicit NoAdaptPolicy(PlanSolver solver = PlanSolver::Greedy) : solver_(solver) {}
  std::string name() const override { return "coil-noadapt"; }
  InteractionAction decide(const EpisodeState& st) override;
  bool uses_teach_feedback() const override { return false; }
  DecisionMeta last_meta() const override { return meta_; }

 private:
  PlanSolver solver_;
  DecisionMeta meta_;
};

// Confidence-gated active-preference learning over a known-prefs planner:
// query the current task's preference until its belief peaks above alpha,
// then follow the allocation plan computed with MAP beliefs.
struct CadlConfig {
  double alpha = 0.8;
};

InteractionAction cadl_step(const EpisodeState& st, const CadlConfig& cfg);

class CadlPolicy : public Policy {
 public:
  explicit CadlPolicy(CadlConfig cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "cadl"; }
  InteractionAction decide(const EpisodeState& st) override;
  DecisionMeta last_meta() const override { return meta_; }

 private:
  CadlConfig cfg_;
  DecisionMeta meta_;
};

// Information-gain scoring: score(a) = gain(a) - beta_scale * cost(a), gains
// from belief entropy over the remaining horizon (preference queries) or
// expected execution-safety improvement (skill queries). `Remaining` keeps
// the summed post-query entropy itself as the gain term.
struct IgConfig {
  double beta_scale = 0.01;
  enum class EntropyMode { Reduction, Remaining } entropy_mode = EntropyMode::Reduction;
};

InteractionAction ig_step(const EpisodeState& st, const IgConfig& cfg);

class IgPolicy : public Policy {
 public:
  explicit IgPolicy(IgConfig cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "ig"; }
  InteractionAction decide(const EpisodeState& st) override { return ig_step(st, cfg_); }

 private:
  IgConfig cfg_;
};

// Confidence thresholds only: query preference below alpha, teach while the
// best library skill is unsafe, otherwise execute. Never delegates.
struct CbaConfig {
  double alpha = 0.8;
};

InteractionAction cba_step(const EpisodeState& st, const CbaConfig& cfg);

class CbaPolicy : public Policy {
 public:
  explicit CbaPolicy(CbaConfig cfg = {}) : cfg_(cfg) {}
  std::string name() const override { return "cba"; }
  InteractionAction decide(const EpisodeState& st) override { return cba_step(st, cfg_); }

 private:
  CbaConfig cfg_;
};

InteractionAction coil_noadapt_step(const EpisodeState& st,
                                    PlanSolver solver = PlanSolver::Greedy);

struct PolicyConfigs {
  PlanSolver solver = PlanSolver::Greedy;
  CadlConfig cadl;
  IgConfig ig;
  CbaConfig cba;
};

// Factory for CLI algorithm names: coil, coil-noadapt, cadl, ig, cba.
std::unique_ptr<Policy> make_policy(const std::string& name, const PolicyConfigs& cfgs);

}  // namespace coil
