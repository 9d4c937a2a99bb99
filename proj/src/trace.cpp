#include "coil/trace.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace coil {

using nlohmann::json;

namespace {

json profile_json(const CostProfile& p) {
  return {{"c_rob", p.c_rob},           {"c_hum", p.c_hum},
          {"c_pref", p.c_pref},         {"c_skill", p.c_skill},
          {"c_skill_fail", p.c_skill_fail}, {"c_pref_fail", p.c_pref_fail}};
}

}  // namespace

void write_trace(std::ostream& out, const std::string& algorithm, uint64_t seed,
                 const CostProfile& profile, const EpisodeLog& log) {
  json header = {{"record", "header"},
                 {"trace_version", 1},
                 {"algorithm", algorithm},
                 {"seed", seed},
                 {"profile", profile_json(profile)}};
  out << header.dump() << '\n';

  for (const StepRecord& s : log.steps) {
    json rec = {{"record", "step"},
                {"step", s.step},
                {"task_index", s.task_index},
                {"action", to_string(s.action.type)},
                {"theta", s.action.theta},
                {"skill_ref", s.action.skill_ref},
                {"forced", s.forced},
                {"outcome", s.outcome},
                {"charged_cost", s.charged},
                {"penalty", s.penalty},
                {"lambda_teach", s.lambda_teach},
                {"belief_entropy", s.belief_entropy}};
    if (!std::isnan(s.meta.expected_cost)) rec["expected_cost"] = s.meta.expected_cost;
    if (!std::isnan(s.meta.pref_lhs)) rec["pref_lhs"] = s.meta.pref_lhs;
    if (!std::isnan(s.meta.pref_rhs)) rec["pref_rhs"] = s.meta.pref_rhs;
    out << rec.dump() << '\n';
  }

  json footer = {{"record", "footer"},
                 {"steps", log.steps.size()},
                 {"total_cost", log.total_cost},
                 {"penalty_total", log.penalty_total},
                 {"n_teach", log.n_teach},
                 {"n_human", log.n_human},
                 {"n_pref", log.n_pref},
                 {"n_robot", log.n_robot}};
  out << footer.dump() << '\n';
}

ReplaySummary replay_verify(std::istream& in) {
  std::string line;
  std::vector<json> records;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded())
      throw ParseError("trace line " + std::to_string(lineno) + " is not valid JSON");
    if (!rec.contains("record"))
      throw ParseError("trace line " + std::to_string(lineno) + " lacks a record type");
    records.push_back(std::move(rec));
  }
  if (records.empty()) return {};

  if (records.front().at("record") != "header")
    throw ParseError("trace does not start with a header record");
  if (records.back().at("record") != "footer")
    throw ParseError("trace does not end with a footer record");
  const json& header = records.front();
  const json& footer = records.back();

  CostProfile profile;
  try {
    const json& p = header.at("profile");
    profile.c_rob = p.at("c_rob");
    profile.c_hum = p.at("c_hum");
    profile.c_pref = p.at("c_pref");
    profile.c_skill = p.at("c_skill");
    profile.c_skill_fail = p.at("c_skill_fail");
    profile.c_pref_fail = p.at("c_pref_fail");
  } catch (const json::exception& e) {
    throw ParseError(std::string("trace header profile: ") + e.what());
  }

  double charged = 0.0, penalty = 0.0;
  int32_t n_teach = 0, n_human = 0, n_pref = 0, n_robot = 0;
  int32_t step_no = 0;
  for (size_t i = 1; i + 1 < records.size(); ++i) {
    const json& s = records[i];
    if (s.at("record") != "step")
      throw ParseError("unexpected record between header and footer");
    try {
      if (s.at("step").get<int32_t>() != step_no)
        throw InvariantViolationError("step records out of order at step " +
                                      std::to_string(step_no));
      std::string action = s.at("action");
      charged += s.at("charged_cost").get<double>();
      penalty += s.at("penalty").get<double>();
      if (action == "request_skill") ++n_teach;
      else if (action == "request_human") ++n_human;
      else if (action == "request_pref") ++n_pref;
      else if (action == "execute_skill") ++n_robot;
      else throw ParseError("unknown action in step " + std::to_string(step_no));

      if (action == "request_pref" && s.contains("pref_lhs") && s.contains("pref_rhs")) {
        double lhs = s.at("pref_lhs"), rhs = s.at("pref_rhs");
        if (lhs > rhs + kCostTol)
          throw InvariantViolationError(
              "preference request at step " + std::to_string(step_no) +
              " violates the request inequality");
      }
    } catch (const json::exception& e) {
      throw ParseError("step " + std::to_string(step_no) + ": " + e.what());
    }
    ++step_no;
  }

  double total = footer.at("total_cost");
  if (std::fabs(charged + penalty - total) > kCostTol)
    throw InvariantViolationError("charged costs do not sum to the footer total");
  if (std::fabs(penalty - footer.at("penalty_total").get<double>()) > kCostTol)
    throw InvariantViolationError("step penalties do not sum to the footer penalty total");
  if (n_teach != footer.at("n_teach").get<int32_t>() ||
      n_human != footer.at("n_human").get<int32_t>() ||
      n_pref != footer.at("n_pref").get<int32_t>() ||
      n_robot != footer.at("n_robot").get<int32_t>())
    throw InvariantViolationError("footer action counts do not match the steps");
  double expect = n_teach * profile.c_skill + n_human * profile.c_hum +
                  n_pref * profile.c_pref + n_robot * profile.c_rob +
                  footer.at("penalty_total").get<double>();
  if (std::fabs(expect - total) > kCostTol)
    throw InvariantViolationError("accounting identity fails for the header profile");

  return {step_no, total};
}

void write_scenario_json(std::ostream& out, const Scenario& sc) {
  json j;
  j["seed"] = sc.seed;
  j["grid_size"] = sc.grid_size;
  j["goals"] = sc.goals.params;
  j["varieties"] = json::array();
  for (const auto& v : sc.varieties)
    j["varieties"].push_back(
        {{"id", v.id}, {"type", v.object_type}, {"color", v.color}});
  j["hidden_prefs"] = sc.hidden_prefs;
  j["challenging"] = std::vector<int32_t>(sc.challenging.begin(), sc.challenging.end());
  j["sequence"] = json::array();
  for (const auto& t : sc.sequence) {
    json tj = {{"variety", t.variety}, {"type", t.object_type}, {"color", t.color}};
    if (t.position) tj["position"] = {t.position->first, t.position->second};
    j["sequence"].push_back(tj);
  }
  out << j.dump(2) << '\n';
}

}  // namespace coil
