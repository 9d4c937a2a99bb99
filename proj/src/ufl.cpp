#include "coil/ufl.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace coil {

std::optional<double> UflInstance::service_cost(int32_t facility, int32_t demand) const {
  if (facility < 0 || facility >= n_facilities()) return std::nullopt;
  for (const Edge& e : edges[facility])
    if (e.demand == demand) return e.cost;
  return std::nullopt;
}

void UflInstance::validate() const {
  if (n_demands < 0) throw UflError("negative demand count");
  if (edges.size() != open_costs.size()) throw UflError("edges/open_costs size mismatch");
  if (tie_tol < 0.0) throw UflError("negative tie tolerance");
  for (size_t f = 0; f < open_costs.size(); ++f) {
    double oc = open_costs[f];
    if (!std::isfinite(oc) || oc < 0.0)
      throw UflError("facility " + std::to_string(f) + ": bad open cost");
    std::vector<char> seen(static_cast<size_t>(n_demands), 0);
    for (const Edge& e : edges[f]) {
      if (e.demand < 0 || e.demand >= n_demands)
        throw UflError("facility " + std::to_string(f) + ": edge demand out of range");
      if (!std::isfinite(e.cost) || e.cost < 0.0)
        throw UflError("facility " + std::to_string(f) + ": bad service cost");
      if (seen[static_cast<size_t>(e.demand)])
        throw UflError("facility " + std::to_string(f) + ": duplicate edge for demand " +
                       std::to_string(e.demand));
      seen[static_cast<size_t>(e.demand)] = 1;
    }
  }
}

double solution_cost(const UflInstance& inst, const UflSolution& sol) {
  inst.validate();
  std::vector<char> is_open(static_cast<size_t>(inst.n_facilities()), 0);
  for (int32_t f : sol.open) {
    if (f < 0 || f >= inst.n_facilities())
      throw InconsistentSolutionError("open facility " + std::to_string(f) + " out of range");
    is_open[static_cast<size_t>(f)] = 1;
  }
  if (static_cast<int32_t>(sol.assignment.size()) != inst.n_demands)
    throw InconsistentSolutionError("assignment size != demand count");
  for (int32_t d = 0; d < inst.n_demands; ++d) {
    int32_t f = sol.assignment[static_cast<size_t>(d)];
    if (f < 0 || f >= inst.n_facilities() || !is_open[static_cast<size_t>(f)])
      throw InconsistentSolutionError("demand " + std::to_string(d) +
                                      " assigned to closed facility " + std::to_string(f));
    if (!inst.service_cost(f, d))
      throw InconsistentSolutionError("demand " + std::to_string(d) +
                                      " assigned to facility " + std::to_string(f) +
                                      " with no edge");
  }

  double total = 0.0;
  for (int32_t f : sol.open) total += inst.open_costs[static_cast<size_t>(f)];
  for (int32_t d = 0; d < inst.n_demands; ++d) {
    double best = std::numeric_limits<double>::max();
    bool found = false;
    for (int32_t f : sol.open) {
      if (auto c = inst.service_cost(f, d); c && *c < best) {
        best = *c;
        found = true;
      }
    }
    if (!found)
      throw InconsistentSolutionError("demand " + std::to_string(d) +
                                      " unreachable from open set");
    total += best;
  }
  return total;
}

void dump_instance(const UflInstance& inst, std::ostream& out) {
  out << inst.n_demands << ' ' << inst.n_facilities() << '\n';
  for (int32_t f = 0; f < inst.n_facilities(); ++f)
    out << f << ' ' << inst.open_costs[static_cast<size_t>(f)] << '\n';
  for (int32_t f = 0; f < inst.n_facilities(); ++f) {
    std::vector<Edge> es = inst.edges[static_cast<size_t>(f)];
    std::sort(es.begin(), es.end(),
              [](const Edge& a, const Edge& b) { return a.demand < b.demand; });
    for (const Edge& e : es) out << f << ' ' << e.demand << ' ' << e.cost << '\n';
  }
}

UflInstance load_instance(std::istream& in) {
  UflInstance inst;
  int32_t n_fac = 0;
  if (!(in >> inst.n_demands >> n_fac)) throw UflError("bad instance header");
  if (inst.n_demands < 0 || n_fac < 0) throw UflError("negative size in header");
  inst.open_costs.resize(static_cast<size_t>(n_fac));
  inst.edges.resize(static_cast<size_t>(n_fac));
  for (int32_t i = 0; i < n_fac; ++i) {
    int32_t id;
    double oc;
    if (!(in >> id >> oc)) throw UflError("bad facility line");
    if (id < 0 || id >= n_fac) throw UflError("facility id out of range");
    inst.open_costs[static_cast<size_t>(id)] = oc;
  }
  int32_t f, d;
  double c;
  while (in >> f >> d >> c) {
    if (f < 0 || f >= n_fac) throw UflError("edge facility out of range");
    inst.edges[static_cast<size_t>(f)].push_back({d, c});
  }
  inst.validate();
  return inst;
}

namespace {

// Bounded draws from raw mt19937_64 output; std::uniform_* distributions are
// not bit-stable across standard libraries.
uint64_t draw_u64(std::mt19937_64& rng, uint64_t n) {
  uint64_t lim = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % n;
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * draw_unit(rng);
}

}  // namespace

UflInstance gen_random_instance(uint64_t seed, const InstanceGenConfig& cfg) {
  if (cfg.n_demands < 0 || cfg.n_facilities < 1) throw UflError("bad generator sizes");
  std::mt19937_64 rng(seed);
  UflInstance inst;
  inst.n_demands = cfg.n_demands;
  inst.open_costs.resize(static_cast<size_t>(cfg.n_facilities));
  inst.edges.resize(static_cast<size_t>(cfg.n_facilities));
  for (auto& oc : inst.open_costs) oc = draw_range(rng, cfg.open_lo, cfg.open_hi);

  std::vector<std::pair<double, double>> fpos, dpos;
  if (cfg.metric) {
    for (int32_t f = 0; f < cfg.n_facilities; ++f)
      fpos.emplace_back(draw_range(rng, 0, 100), draw_range(rng, 0, 100));
    for (int32_t d = 0; d < cfg.n_demands; ++d)
      dpos.emplace_back(draw_range(rng, 0, 100), draw_range(rng, 0, 100));
  }

  for (int32_t f = 0; f < cfg.n_facilities; ++f) {
    for (int32_t d = 0; d < cfg.n_demands; ++d) {
      if (draw_unit(rng) < cfg.infeasible_frac) continue;
      double c;
      if (cfg.metric) {
        double dx = fpos[static_cast<size_t>(f)].first - dpos[static_cast<size_t>(d)].first;
        double dy = fpos[static_cast<size_t>(f)].second - dpos[static_cast<size_t>(d)].second;
        c = cfg.service_lo +
            (cfg.service_hi - cfg.service_lo) * std::sqrt(dx * dx + dy * dy) / 141.5;
      } else {
        c = draw_range(rng, cfg.service_lo, cfg.service_hi);
      }
      inst.edges[static_cast<size_t>(f)].push_back({d, c});
    }
  }

  // Guarantee feasibility: give edge-less demands one random facility.
  std::vector<char> covered(static_cast<size_t>(cfg.n_demands), 0);
  for (const auto& es : inst.edges)
    for (const Edge& e : es) covered[static_cast<size_t>(e.demand)] = 1;
  for (int32_t d = 0; d < cfg.n_demands; ++d) {
    if (covered[static_cast<size_t>(d)]) continue;
    auto f = static_cast<int32_t>(draw_u64(rng, static_cast<uint64_t>(cfg.n_facilities)));
    inst.edges[static_cast<size_t>(f)].push_back(
        {d, draw_range(rng, cfg.service_lo, cfg.service_hi)});
  }
  return inst;
}

}  // namespace coil
