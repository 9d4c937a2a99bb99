#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coil/ufl.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coil {

namespace {

bool edge_order(const Edge& a, const Edge& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.demand < b.demand;
}

struct Candidate {
  double ratio = 0.0;
  int32_t prefix = 0;
  bool valid = false;
};

// Tie rule: lower ratio wins beyond the tolerance; within it, lowest facility
// id, then shortest prefix.
bool beats(const Candidate& c, int32_t cf, const Candidate& inc, int32_t incf, double tol) {
  if (!inc.valid) return c.valid;
  if (!c.valid) return false;
  if (c.ratio < inc.ratio - tol) return true;
  if (c.ratio > inc.ratio + tol) return false;
  if (cf != incf) return cf < incf;
  return c.prefix < inc.prefix;
}

// Best prefix of a cost-sorted, unserved-only edge list.
Candidate best_prefix(const std::vector<Edge>& list, double eff_open, double tol) {
  Candidate best;
  double sum = eff_open;
  for (size_t k = 1; k <= list.size(); ++k) {
    sum += list[k - 1].cost;
    double ratio = sum / static_cast<double>(k);
    if (!best.valid || ratio < best.ratio - tol) {
      best.ratio = ratio;
      best.prefix = static_cast<int32_t>(k);
      best.valid = true;
    }
  }
  return best;
}

void check_feasible(const UflInstance& inst) {
  std::vector<char> covered(static_cast<size_t>(inst.n_demands), 0);
  for (const auto& es : inst.edges)
    for (const Edge& e : es) covered[static_cast<size_t>(e.demand)] = 1;
  for (int32_t d = 0; d < inst.n_demands; ++d)
    if (!covered[static_cast<size_t>(d)])
      throw InfeasibleError("demand " + std::to_string(d) + " has no feasible facility");
}

UflSolution finish(const UflInstance& inst, const std::vector<char>& opened,
                   double paid_open) {
  UflSolution sol;
  double open_total = 0.0;
  for (int32_t f = 0; f < inst.n_facilities(); ++f) {
    if (!opened[static_cast<size_t>(f)]) continue;
    sol.open.push_back(f);
    open_total += inst.open_costs[static_cast<size_t>(f)];
  }
  if (std::fabs(open_total - paid_open) > 1e-6)
    throw UflError("internal: open-cost accounting drift");

  // Reassignment pass: cheapest open facility per demand, ties to lowest id.
  std::vector<double> best(static_cast<size_t>(inst.n_demands),
                           std::numeric_limits<double>::max());
  sol.assignment.assign(static_cast<size_t>(inst.n_demands), -1);
  for (int32_t f : sol.open) {
    for (const Edge& e : inst.edges[static_cast<size_t>(f)]) {
      auto d = static_cast<size_t>(e.demand);
      if (e.cost < best[d]) {
        best[d] = e.cost;
        sol.assignment[d] = f;
      }
    }
  }
  double service_total = 0.0;
  for (int32_t d = 0; d < inst.n_demands; ++d) {
    if (sol.assignment[static_cast<size_t>(d)] < 0)
      throw UflError("internal: demand left unassigned");
    service_total += best[static_cast<size_t>(d)];
  }
  sol.total_cost = open_total + service_total;
  return sol;
}

}  // namespace

UflSolution solve_greedy_serial(const UflInstance& inst) {
  inst.validate();
  check_feasible(inst);
  const int32_t nf = inst.n_facilities();
  std::vector<double> eff(inst.open_costs);
  std::vector<char> opened(static_cast<size_t>(nf), 0);
  std::vector<char> served(static_cast<size_t>(inst.n_demands), 0);
  int32_t unserved = inst.n_demands;
  double paid_open = 0.0;

  std::vector<Edge> avail;
  while (unserved > 0) {
    Candidate inc;
    int32_t inc_f = -1;
    std::vector<Edge> inc_list;
    for (int32_t f = 0; f < nf; ++f) {
      avail.clear();
      for (const Edge& e : inst.edges[static_cast<size_t>(f)])
        if (!served[static_cast<size_t>(e.demand)]) avail.push_back(e);
      std::sort(avail.begin(), avail.end(), edge_order);
      Candidate c = best_prefix(avail, eff[static_cast<size_t>(f)], inst.tie_tol);
      if (beats(c, f, inc, inc_f, inst.tie_tol)) {
        inc = c;
        inc_f = f;
        inc_list = avail;
      }
    }
    if (!inc.valid) throw UflError("internal: no greedy candidate");
    for (int32_t k = 0; k < inc.prefix; ++k)
      served[static_cast<size_t>(inc_list[static_cast<size_t>(k)].demand)] = 1;
    unserved -= inc.prefix;
    paid_open += eff[static_cast<size_t>(inc_f)];
    eff[static_cast<size_t>(inc_f)] = 0.0;
    opened[static_cast<size_t>(inc_f)] = 1;
  }
  return finish(inst, opened, paid_open);
}

UflSolution solve_greedy(const UflInstance& inst) {
  inst.validate();
  check_feasible(inst);
  const int32_t nf = inst.n_facilities();

  // Cost-sorted working copies; served demands are compacted out each round,
  // so the first k entries of a list are always that facility's best prefix.
  std::vector<std::vector<Edge>> work(inst.edges);
  for (auto& list : work) std::sort(list.begin(), list.end(), edge_order);

  std::vector<double> eff(inst.open_costs);
  std::vector<char> opened(static_cast<size_t>(nf), 0);
  std::vector<char> served(static_cast<size_t>(inst.n_demands), 0);
  int32_t unserved = inst.n_demands;
  double paid_open = 0.0;
  std::vector<Candidate> cands(static_cast<size_t>(nf));

  while (unserved > 0) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (nf >= 64)
#endif
    for (int32_t f = 0; f < nf; ++f) {
      auto& list = work[static_cast<size_t>(f)];
      size_t w = 0;
      for (size_t r = 0; r < list.size(); ++r)
        if (!served[static_cast<size_t>(list[r].demand)]) list[w++] = list[r];
      list.resize(w);
      cands[static_cast<size_t>(f)] =
          best_prefix(list, eff[static_cast<size_t>(f)], inst.tie_tol);
    }

    Candidate inc;
    int32_t inc_f = -1;
    for (int32_t f = 0; f < nf; ++f)
      if (beats(cands[static_cast<size_t>(f)], f, inc, inc_f, inst.tie_tol)) {
        inc = cands[static_cast<size_t>(f)];
        inc_f = f;
      }
    if (!inc.valid) throw UflError("internal: no greedy candidate");

    const auto& win = work[static_cast<size_t>(inc_f)];
    for (int32_t k = 0; k < inc.prefix; ++k)
      served[static_cast<size_t>(win[static_cast<size_t>(k)].demand)] = 1;
    unserved -= inc.prefix;
    paid_open += eff[static_cast<size_t>(inc_f)];
    eff[static_cast<size_t>(inc_f)] = 0.0;
    opened[static_cast<size_t>(inc_f)] = 1;
  }
  return finish(inst, opened, paid_open);
}

}  // namespace coil
