#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "coil/gridworld.hpp"

namespace coil {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-delimited JSON: one header record, one record per step, one footer
// with totals. Schema documented in the README.
void write_trace(std::ostream& out, const std::string& algorithm, uint64_t seed,
                 const CostProfile& profile, const EpisodeLog& log);

struct ReplaySummary {
  int32_t steps = 0;
  double total_cost = 0.0;
};

// Re-verifies a trace: charged costs and penalties must sum to the footer
// total, per-action counts must match, the count/cost accounting identity
// must hold for the header profile, and every preference request carrying
// its decision values must satisfy lhs <= rhs + tol. Empty input is
// vacuously fine. Throws ParseError or InvariantViolationError.
ReplaySummary replay_verify(std::istream& in);

void write_scenario_json(std::ostream& out, const Scenario& sc);

}  // namespace coil
