#include <algorithm>
#include <cstring>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "coil/ufl.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coil {

namespace {

void check_feasible(const UflInstance& inst) {
  std::vector<char> covered(static_cast<size_t>(inst.n_demands), 0);
  for (const auto& es : inst.edges)
    for (const Edge& e : es) covered[static_cast<size_t>(e.demand)] = 1;
  for (int32_t d = 0; d < inst.n_demands; ++d)
    if (!covered[static_cast<size_t>(d)])
      throw InfeasibleError("demand " + std::to_string(d) + " has no feasible facility");
}

constexpr double kUnset = -1.0;

// Total cost of opening exactly the facilities in mask; nullopt when some
// demand is unreachable. scratch holds per-demand minima, demand order keeps
// the summation deterministic.
std::optional<double> eval_mask(const UflInstance& inst, uint64_t mask,
                                std::vector<double>& scratch) {
  scratch.assign(static_cast<size_t>(inst.n_demands), kUnset);
  double total = 0.0;
  int32_t seen = 0;
  for (uint64_t m = mask; m != 0; m &= m - 1) {
    auto f = static_cast<int32_t>(__builtin_ctzll(m));
    total += inst.open_costs[static_cast<size_t>(f)];
    for (const Edge& e : inst.edges[static_cast<size_t>(f)]) {
      auto d = static_cast<size_t>(e.demand);
      if (scratch[d] == kUnset) {
        scratch[d] = e.cost;
        ++seen;
      } else if (e.cost < scratch[d]) {
        scratch[d] = e.cost;
      }
    }
  }
  if (seen < inst.n_demands) return std::nullopt;
  for (int32_t d = 0; d < inst.n_demands; ++d) total += scratch[static_cast<size_t>(d)];
  return total;
}

struct MaskBest {
  double cost = std::numeric_limits<double>::max();
  uint64_t mask = 0;
  bool valid = false;

  void offer(double c, uint64_t m) {
    if (!valid || c < cost || (c == cost && m < mask)) {
      cost = c;
      mask = m;
      valid = true;
    }
  }
  void merge(const MaskBest& o) {
    if (o.valid) offer(o.cost, o.mask);
  }
};

UflSolution from_mask(const UflInstance& inst, uint64_t mask, double cost) {
  UflSolution sol;
  for (uint64_t m = mask; m != 0; m &= m - 1)
    sol.open.push_back(static_cast<int32_t>(__builtin_ctzll(m)));
  sol.assignment.assign(static_cast<size_t>(inst.n_demands), -1);
  std::vector<double> best(static_cast<size_t>(inst.n_demands),
                           std::numeric_limits<double>::max());
  for (int32_t f : sol.open)
    for (const Edge& e : inst.edges[static_cast<size_t>(f)]) {
      auto d = static_cast<size_t>(e.demand);
      if (e.cost < best[d]) {
        best[d] = e.cost;
        sol.assignment[d] = f;
      }
    }
  sol.total_cost = cost;
  return sol;
}

UflSolution enumerate_masks(const UflInstance& inst, bool parallel) {
  const int32_t nf = inst.n_facilities();
  const uint64_t count = uint64_t{1} << nf;
  MaskBest best;

  if (!parallel) {
    std::vector<double> scratch;
    for (uint64_t mask = 1; mask < count; ++mask)
      if (auto c = eval_mask(inst, mask, scratch)) best.offer(*c, mask);
  } else {
#ifdef _OPENMP
#pragma omp parallel
    {
      MaskBest local;
      std::vector<double> scratch;
#pragma omp for schedule(static)
      for (int64_t mask = 1; mask < static_cast<int64_t>(count); ++mask)
        if (auto c = eval_mask(inst, static_cast<uint64_t>(mask), scratch))
          local.offer(*c, static_cast<uint64_t>(mask));
#pragma omp critical
      best.merge(local);
    }
#else
    std::vector<double> scratch;
    for (uint64_t mask = 1; mask < count; ++mask)
      if (auto c = eval_mask(inst, mask, scratch)) best.offer(*c, mask);
#endif
  }
  if (!best.valid) throw InfeasibleError("no facility subset covers all demands");
  return from_mask(inst, best.mask, best.cost);
}

// Best-first branch and bound over include/exclude decisions in facility id
// order. Lower bound: open costs committed so far plus each demand's cheapest
// edge among committed-open and still-undecided facilities.
UflSolution branch_and_bound(const UflInstance& inst, int64_t node_budget) {
  const int32_t nf = inst.n_facilities();

  struct Node {
    double lb;
    int32_t depth;  // facilities [0, depth) decided
    uint64_t open_mask;
    uint64_t serial;
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.lb != b.lb) return a.lb > b.lb;
      return a.serial > b.serial;
    }
  };

  std::vector<double> scratch;
  auto lower_bound = [&](int32_t depth, uint64_t open_mask) -> std::optional<double> {
    scratch.assign(static_cast<size_t>(inst.n_demands), kUnset);
    double total = 0.0;
    for (uint64_t m = open_mask; m != 0; m &= m - 1)
      total += inst.open_costs[static_cast<size_t>(__builtin_ctzll(m))];
    for (int32_t f = 0; f < nf; ++f) {
      bool usable = (f >= depth) || ((open_mask >> f) & 1);
      if (!usable) continue;
      for (const Edge& e : inst.edges[static_cast<size_t>(f)]) {
        auto d = static_cast<size_t>(e.demand);
        if (scratch[d] == kUnset || e.cost < scratch[d]) scratch[d] = e.cost;
      }
    }
    for (int32_t d = 0; d < inst.n_demands; ++d) {
      if (scratch[static_cast<size_t>(d)] == kUnset) return std::nullopt;
      total += scratch[static_cast<size_t>(d)];
    }
    return total;
  };

  MaskBest incumbent;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  uint64_t serial = 0;
  if (auto lb = lower_bound(0, 0)) heap.push({*lb, 0, 0, serial++});
  int64_t expanded = 0;

  std::vector<double> eval_scratch;
  while (!heap.empty()) {
    Node node = heap.top();
    heap.pop();
    if (incumbent.valid && node.lb >= incumbent.cost) continue;
    if (++expanded > node_budget)
      throw BoundExceededError("branch-and-bound node budget exhausted");

    if (node.depth == nf) {
      if (auto c = eval_mask(inst, node.open_mask, eval_scratch))
        incumbent.offer(*c, node.open_mask);
      continue;
    }
    for (int include = 1; include >= 0; --include) {
      uint64_t mask = node.open_mask | (include ? (uint64_t{1} << node.depth) : 0);
      if (auto lb = lower_bound(node.depth + 1, mask)) {
        if (!incumbent.valid || *lb < incumbent.cost)
          heap.push({*lb, node.depth + 1, mask, serial++});
      }
    }
  }
  if (!incumbent.valid) throw InfeasibleError("no facility subset covers all demands");
  return from_mask(inst, incumbent.mask, incumbent.cost);
}

UflSolution exact_impl(const UflInstance& inst, const ExactOptions& opts, bool parallel) {
  inst.validate();
  if (inst.n_facilities() > 63)
    throw UflError("exact solver is limited to 63 facilities");
  if (inst.n_demands == 0) return UflSolution{{}, {}, 0.0};
  check_feasible(inst);
  if (inst.n_facilities() <= opts.enum_max_facilities)
    return enumerate_masks(inst, parallel);
  return branch_and_bound(inst, opts.node_budget);
}

}  // namespace

UflSolution solve_exact(const UflInstance& inst, const ExactOptions& opts) {
  return exact_impl(inst, opts, true);
}

UflSolution solve_exact_serial(const UflInstance& inst, const ExactOptions& opts) {
  return exact_impl(inst, opts, false);
}

}  // namespace coil
