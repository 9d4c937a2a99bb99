#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coil {

// Uncapacitated facility location. Demands must each be assigned to one open
// facility; objective = sum of open costs + sum of assigned service costs.
// Service costs are stored sparsely: a missing (facility, demand) edge means
// that facility can never serve that demand. No arithmetic infinities.

struct UflError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : UflError {
  using UflError::UflError;
};
struct BoundExceededError : UflError {
  using UflError::UflError;
};
struct InconsistentSolutionError : UflError {
  using UflError::UflError;
};

struct Edge {
  int32_t demand = 0;
  double cost = 0.0;
};

struct UflInstance {
  int32_t n_demands = 0;
  std::vector<double> open_costs;        // facility id = index
  std::vector<std::vector<Edge>> edges;  // per facility, any order, unique demands
  double tie_tol = 1e-9;                 // equality tolerance for ratio ties

  int32_t n_facilities() const { return static_cast<int32_t>(open_costs.size()); }
  std::optional<double> service_cost(int32_t facility, int32_t demand) const;
  void validate() const;  // structural checks; throws UflError
};

struct UflSolution {
  std::vector<int32_t> open;        // ascending facility ids
  std::vector<int32_t> assignment;  // demand -> facility id
  double total_cost = 0.0;
};

// Validates the assignment against the instance (open facility, edge exists),
// then returns sum of open costs plus each demand's cheapest service cost over
// the open set. Empty demand set with nothing open costs 0.
double solution_cost(const UflInstance& inst, const UflSolution& sol);

// Greedy ratio heuristic. Repeatedly opens the (facility, demand-prefix) pair
// minimizing (effective open cost + prefix service sum) / prefix length, zeroes
// the facility's effective open cost, and finishes by reassigning every demand
// to its cheapest open facility. Ties resolve to the lowest facility id, then
// the shortest prefix, under the instance tolerance. Deterministic.
UflSolution solve_greedy(const UflInstance& inst);         // OpenMP kernel
UflSolution solve_greedy_serial(const UflInstance& inst);  // reference

struct ExactOptions {
  int32_t enum_max_facilities = 22;  // subset enumeration up to here
  int64_t node_budget = 10'000'000;  // branch-and-bound expansions beyond it
};

// Optimal solver: subset enumeration while the facility count permits,
// otherwise best-first branch-and-bound with a per-demand-minimum lower
// bound. Throws BoundExceededError when the node budget runs out.
UflSolution solve_exact(const UflInstance& inst, const ExactOptions& opts = {});
UflSolution solve_exact_serial(const UflInstance& inst, const ExactOptions& opts = {});

// Line-oriented text format:
//   n_demands n_facilities
//   <facility id> <open cost>           (one line per facility)
//   <facility> <demand> <service cost>  (one line per finite edge)
void dump_instance(const UflInstance& inst, std::ostream& out);
UflInstance load_instance(std::istream& in);

// Random instances for benchmarks and tests. Every demand is guaranteed at
// least one finite edge. metric=true derives service costs from planar
// point distances instead of independent uniforms.
struct InstanceGenConfig {
  int32_t n_demands = 10;
  int32_t n_facilities = 10;
  double open_lo = 1.0, open_hi = 100.0;
  double service_lo = 1.0, service_hi = 50.0;
  double infeasible_frac = 0.0;
  bool metric = false;
};
UflInstance gen_random_instance(uint64_t seed, const InstanceGenConfig& cfg);

}  // namespace coil
