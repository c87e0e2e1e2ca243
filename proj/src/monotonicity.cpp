#include "mmot/monotonicity.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace mmot {

std::vector<int> SwapPattern::positions() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::pair<RadiiTuple, RadiiTuple> swap_coordinates(const RadiiTuple& x,
                                                   const RadiiTuple& y,
                                                   const SwapPattern& p) {
  if (x.size() != y.size() || x.size() != p.n)
    throw ArityMismatch("swap needs tuples and pattern of equal arity");
  double xv[4], yv[4];
  for (int i = 0; i < x.size(); ++i) {
    if (p.contains(i + 1)) {
      xv[i] = x[i];
      yv[i] = y[i];
    } else {
      xv[i] = y[i];
      yv[i] = x[i];
    }
  }
  const auto nsz = static_cast<size_t>(x.size());
  return {RadiiTuple(std::span<const double>(xv, nsz)),
          RadiiTuple(std::span<const double>(yv, nsz))};
}

std::string to_json_line(const ViolationReport& report) {
  nlohmann::json j;
  j["kind"] = report.kind == ViolationReport::Kind::Subset ? "subset" : "partition";
  j["x"] = std::vector<double>(report.x.values().begin(), report.x.values().end());
  j["y"] = std::vector<double>(report.y.values().begin(), report.y.values().end());
  j[report.kind == ViolationReport::Kind::Subset ? "kept_positions" : "partition_indices"] =
      report.detail;
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["gap"] = report.gap;
  return j.dump();
}

std::vector<ViolationReport> check_pair(const CostFn& cost, const RadiiTuple& x,
                                        const RadiiTuple& y) {
  if (x.size() != y.size()) throw ArityMismatch("check_pair needs equal arity");
  const int n = x.size();
  const unsigned full = (1u << n) - 1u;
  const double lhs = cost(x) + cost(y);

  // cost of X(mask); Y(mask) equals X(~mask), so every gap is a sum of two
  // cached values and the complement symmetry is exact.
  std::vector<double> cx(full + 1);
  for (unsigned mask = 0; mask <= full; ++mask) {
    SwapPattern p{mask, n};
    cx[mask] = cost(swap_coordinates(x, y, p).first);
  }
  std::vector<ViolationReport> out;
  out.reserve(full + 1);
  for (unsigned mask = 0; mask <= full; ++mask) {
    SwapPattern p{mask, n};
    ViolationReport rep;
    rep.kind = ViolationReport::Kind::Subset;
    rep.x = x;
    rep.y = y;
    rep.detail = p.positions();
    rep.lhs = lhs;
    rep.rhs = cx[mask] + cx[full & ~mask];
    rep.gap = rep.rhs - rep.lhs;
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<ViolationReport> check_pair_strong(const CostFn& cost, const RadiiTuple& x,
                                               const RadiiTuple& y) {
  if (x.size() != y.size()) throw ArityMismatch("check_pair_strong needs equal arity");
  const int n = x.size();
  std::vector<double> all;
  for (int i = 0; i < n; ++i) all.push_back(x[i]);
  for (int i = 0; i < n; ++i) all.push_back(y[i]);
  std::sort(all.begin(), all.end());
  for (size_t i = 1; i < all.size(); ++i)
    if (all[i] == all[i - 1])
      throw DuplicateCoordinates("strong test needs 2N pairwise distinct coordinates");

  const double lhs = cost(x) + cost(y);
  const int total = 2 * n;
  std::vector<ViolationReport> out;

  // subsets of {1, ..., 2n-1} of size n-1, lexicographic; index 0 is pinned
  // to the first set, which kills the unordered double count
  std::vector<int> pick(static_cast<size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) pick[static_cast<size_t>(i)] = i + 1;
  while (true) {
    ViolationReport rep;
    rep.kind = ViolationReport::Kind::Partition;
    rep.x = x;
    rep.y = y;
    rep.detail = {0};
    std::vector<char> taken(static_cast<size_t>(total), 0);
    taken[0] = 1;
    for (int idx : pick) {
      rep.detail.push_back(idx);
      taken[static_cast<size_t>(idx)] = 1;
    }
    double av[4], bv[4];
    int na = 0, nb = 0;
    for (int i = 0; i < total; ++i)
      (taken[static_cast<size_t>(i)] ? av[na++] : bv[nb++]) = all[static_cast<size_t>(i)];
    rep.lhs = lhs;
    rep.rhs = cost(RadiiTuple(std::span<const double>(av, static_cast<size_t>(n)))) +
              cost(RadiiTuple(std::span<const double>(bv, static_cast<size_t>(n))));
    rep.gap = rep.rhs - rep.lhs;
    out.push_back(std::move(rep));

    // next combination
    int pos = n - 2;
    while (pos >= 0 && pick[static_cast<size_t>(pos)] == total - (n - 1) + pos) --pos;
    if (pos < 0) break;
    ++pick[static_cast<size_t>(pos)];
    for (int q = pos + 1; q < n - 1; ++q)
      pick[static_cast<size_t>(q)] = pick[static_cast<size_t>(q - 1)] + 1;
  }
  return out;
}

ViolationReport minimizing_report(const std::vector<ViolationReport>& reports) {
  if (reports.empty()) throw Error("no reports to minimize over");
  size_t best = 0;
  for (size_t i = 1; i < reports.size(); ++i)
    if (reports[i].rhs < reports[best].rhs) best = i;
  return reports[best];
}

bool pair_is_c_monotone(const std::vector<ViolationReport>& reports, double tol) {
  for (const auto& r : reports)
    if (r.gap < -tol) return false;
  return true;
}

double violation_threshold(double lhs, double value_tol) {
  return -10.0 * value_tol * (1.0 + std::fabs(lhs));
}

std::vector<ViolationReport> search_violations(const MonotoneMap& map, const CostFn& cost,
                                               const ViolationSearchSpec& spec) {
  const int P = spec.points_per_cell;
  const int N = map.marginals();
  std::vector<RadiiTuple> orbits;
  orbits.reserve(static_cast<size_t>(P));
  for (int i = 1; i <= P; ++i) {
    const double u0 = (i - 0.5) / (static_cast<double>(P) * N);
    double pts[4];
    double u = u0;
    pts[0] = map.measure().quantile(u);
    for (int s = 1; s < N; ++s) {
      u = map.mass_step(u);
      pts[s] = map.measure().quantile(u);
    }
    orbits.push_back(RadiiTuple(std::span<const double>(pts, static_cast<size_t>(N))));
  }

  std::vector<ViolationReport> found;
  for (int i = 0; i < P; ++i) {
    const int jmax = spec.exhaustive ? P - 1 : std::min(P - 1, i + spec.window);
    for (int j = i + 1; j <= jmax; ++j) {
      const auto subsets = check_pair(cost, orbits[static_cast<size_t>(i)],
                                      orbits[static_cast<size_t>(j)]);
      for (const auto& rep : subsets)
        if (rep.gap < violation_threshold(rep.lhs, spec.value_tol)) found.push_back(rep);
      if (!spec.include_strong) continue;
      bool distinct = true;
      {
        std::vector<double> all;
        for (int k = 0; k < N; ++k) all.push_back(orbits[static_cast<size_t>(i)][k]);
        for (int k = 0; k < N; ++k) all.push_back(orbits[static_cast<size_t>(j)][k]);
        std::sort(all.begin(), all.end());
        for (size_t k = 1; k < all.size(); ++k)
          if (all[k] == all[k - 1]) distinct = false;
      }
      if (!distinct) continue;
      const auto partitions = check_pair_strong(cost, orbits[static_cast<size_t>(i)],
                                                orbits[static_cast<size_t>(j)]);
      for (const auto& rep : partitions)
        if (rep.gap < violation_threshold(rep.lhs, spec.value_tol)) found.push_back(rep);
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const ViolationReport& a, const ViolationReport& b) {
                     return a.gap < b.gap;
                   });
  return found;
}

PartitionInequalityResult cpi_partition_inequality(const std::array<double, 6>& r) {
  for (size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i] < r[i + 1]))
      throw UnsortedRadii("cpi_partition_inequality needs strictly increasing radii");
  if (!(r[0] > 0.0)) throw UnsortedRadii("radii must be positive");

  const double base = cost_pi_ordered(r[0], r[3], r[4]) + cost_pi_ordered(r[1], r[2], r[5]);
  const std::array<double, 3> alts = {
      cost_pi_ordered(r[0], r[3], r[5]) + cost_pi_ordered(r[1], r[2], r[4]),
      cost_pi_ordered(r[0], r[2], r[5]) + cost_pi_ordered(r[1], r[3], r[4]),
      cost_pi_ordered(r[0], r[2], r[4]) + cost_pi_ordered(r[1], r[3], r[5])};

  // line reformulation: positions -r4, -r3, r1, r2, r5, r6; odd vs even
  const double base_line = cost_1d(r[0], -r[3], r[4]) + cost_1d(r[1], -r[2], r[5]);
  const std::array<double, 3> alts_line = {
      cost_1d(r[0], -r[3], r[5]) + cost_1d(r[1], -r[2], r[4]),
      cost_1d(r[0], -r[2], r[5]) + cost_1d(r[1], -r[3], r[4]),
      cost_1d(r[0], -r[2], r[4]) + cost_1d(r[1], -r[3], r[5])};

  PartitionInequalityResult out;
  out.cross_check_residual = std::fabs(base - base_line);
  for (int k = 0; k < 3; ++k) {
    out.gaps[static_cast<size_t>(k)] = alts[static_cast<size_t>(k)] - base;
    out.cross_check_residual = std::max(
        out.cross_check_residual,
        std::fabs(alts[static_cast<size_t>(k)] - alts_line[static_cast<size_t>(k)]));
  }
  out.holds = out.gaps[0] >= -1e-12 && out.gaps[1] >= -1e-12 && out.gaps[2] >= -1e-12;
  return out;
}

}  // namespace mmot
