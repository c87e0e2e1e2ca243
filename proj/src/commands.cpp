#include "mmot/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace mmot::cli {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file " + path);
  out << content;
  if (!out) throw Error("failed writing " + path);
}

// "# key = value" reproducibility header lines
class Meta {
 public:
  Meta(const std::string& command) { add("command", command); }
  void add(const std::string& key, const std::string& value) {
    lines_ += "# " + key + " = " + value + "\n";
    json_[key] = value;
  }
  void add(const std::string& key, double value) {
    lines_ += "# " + key + " = " + fmt17(value) + "\n";
    json_[key] = value;
  }
  void add(const std::string& key, long value) {
    lines_ += "# " + key + " = " + std::to_string(value) + "\n";
    json_[key] = value;
  }
  void add_solver(const SolverOptions& s, int n_marginals) {
    add("solver.grid", static_cast<long>(s.grid_for(n_marginals)));
    add("solver.starts", static_cast<long>(s.starts));
    add("solver.grad_tol", s.grad_tol);
    add("solver.dedup_tol", s.dedup_tol);
    add("solver.value_tol", s.value_tol);
  }
  const std::string& csv_header() const { return lines_; }
  std::string json_line() const {
    nlohmann::json j;
    j["meta"] = json_;
    return j.dump();
  }

 private:
  std::string lines_;
  nlohmann::json json_;
};

CostFn exact_cost_fn(const SolverOptions& solver) {
  return [solver](const RadiiTuple& r) { return exact_cost(r, solver).value; };
}

RadialMeasure narrow_shell_measure(double eps) {
  return RadialMeasure::uniform(1.0, 1.0 + 12.0 * eps);
}

RadialMeasure split_shell_measure(double eps, double M) {
  return RadialMeasure({{1.0, 1.0 + 5.0 * eps, 1.0 / (6.0 * eps)},
                        {M, M + 1.0, 1.0 / 6.0}});
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

CostCommandResult cmd_cost(const std::vector<double>& radii, const SolverOptions& solver,
                           std::ostream& os) {
  const RadiiTuple r{std::span<const double>(radii)};
  CostCommandResult out;
  out.cost = exact_cost(r, solver);
  os << "cost(";
  for (int i = 0; i < r.size(); ++i) os << (i ? ", " : "") << fmt17(r[i]);
  os << ") = " << fmt17(out.cost.value) << "\n";
  os << "  argmin angles (rad):";
  for (int i = 0; i < out.cost.argmin.size(); ++i)
    os << " " << fmt17(out.cost.argmin[i]);
  os << "\n  argmin angles (deg):";
  for (int i = 0; i < out.cost.argmin.size(); ++i)
    os << " " << fmt17(out.cost.argmin[i] * 180.0 / kPi);
  os << "\n  stationary points seen: " << out.cost.stationary_count << "\n";
  if (r.size() == 3) {
    out.triangle = cost_triangle(r);
    os << "  frozen equilateral bound: " << fmt17(out.triangle) << "\n";
    try {
      out.pi = cost_pi(r);
      os << "  frozen collinear bound:   " << fmt17(*out.pi) << "\n";
    } catch (const DegenerateRadii&) {
      os << "  frozen collinear bound:   undefined (equal extreme radii)\n";
    }
  }
  out.exit_code = 0;
  return out;
}

// ---------------------------------------------------------------------------

Ce145Result cmd_ce145(std::optional<double> eps_opt, const SolverOptions& solver,
                      const std::string& out_path, std::ostream& os) {
  Ce145Result out;
  out.eps_auto = !eps_opt.has_value();
  if (out.eps_auto) {
    const NegativeRangeEstimate est = estimate_negative_F_range(1e-3, 1.0, solver);
    out.t0 = est.t0;
    out.t0_sign_change = est.sign_change_found;
    out.eps = std::min(est.t0 / 2.0, 0.01);
    os << "auto eps: pairing functional stays negative up to t0 = " << fmt17(est.t0)
       << (est.sign_change_found ? " (sign change located by bisection)"
                                 : " (no sign change in the probed range)")
       << ", picked eps = " << fmt17(out.eps) << "\n";
  } else {
    out.eps = *eps_opt;
  }

  const CostFn cost = exact_cost_fn(solver);
  const auto run_at = [&](double eps, std::array<double, 6>* radii_out,
                          ViolationReport* rep_out) {
    const MonotoneMap map(narrow_shell_measure(eps), "DDI");
    const RadiiTuple x = map.orbit(1.0 + eps);
    const RadiiTuple y = map.orbit(1.0 + 3.0 * eps);
    if (radii_out)
      *radii_out = {x[0], y[0], y[1], x[1], x[2], y[2]};
    const auto reports = check_pair(cost, x, y);
    // p = {3}: exchange the first two coordinates, keep the third
    *rep_out = reports[4];
    return reports;
  };

  ViolationReport rep{}, rep_half{};
  const auto reports = run_at(out.eps, &out.radii, &rep);
  run_at(out.eps / 2.0, nullptr, &rep_half);
  out.lhs = rep.lhs;
  out.rhs = rep.rhs;
  out.gap = rep.gap;
  out.gap_half = rep_half.gap;
  out.scaling_ratio = rep_half.gap != 0.0 ? rep.gap / rep_half.gap : 0.0;

  const double thr = violation_threshold(rep.lhs, solver.value_tol);
  out.exit_code = rep.gap < thr ? 0 : 2;

  os << "orbit radii: ";
  for (double v : out.radii) os << fmt17(v) << " ";
  os << "\nsupport pairing cost  = " << fmt17(out.lhs)
     << "\nexchanged pairing cost = " << fmt17(out.rhs) << "\ngap = " << fmt17(out.gap)
     << " (violation threshold " << fmt17(thr) << ")\n"
     << "gap at eps/2 = " << fmt17(out.gap_half) << ", ratio = " << fmt17(out.scaling_ratio)
     << "\n"
     << (out.exit_code == 0 ? "violation confirmed: the DDI pairing is not c-monotone\n"
                            : "inconclusive at this tolerance\n");

  if (!out_path.empty()) {
    Meta meta("ce145");
    meta.add("eps", out.eps);
    meta.add("eps_auto", std::string(out.eps_auto ? "true" : "false"));
    if (out.eps_auto) meta.add("t0", out.t0);
    meta.add_solver(solver, 3);
    std::ostringstream body;
    body << meta.json_line() << "\n";
    for (const auto& r : reports) body << to_json_line(r) << "\n";
    write_file(out_path, body.str());
    os << "report written to " << out_path << "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Worst |exact - frozen| over every tuple a swap test can form from the two
// orbits; all of them keep one coordinate per cell.
double worst_cpi_agreement(const CostFn& exact, const RadiiTuple& x, const RadiiTuple& y) {
  double worst = 0.0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const auto [X, Y] = swap_coordinates(x, y, SwapPattern{mask, 3});
    worst = std::max(worst, std::fabs(exact(X) - cost_pi(X)));
    worst = std::max(worst, std::fabs(exact(Y) - cost_pi(Y)));
  }
  return worst;
}

}  // namespace

CeClassResult cmd_ceclass(std::optional<double> eps_opt, std::optional<double> M_opt,
                          const SolverOptions& solver, const std::string& out_path,
                          std::ostream& os) {
  CeClassResult out;
  out.eps = eps_opt.value_or(0.02);
  out.M_auto = !M_opt.has_value();
  const CostFn cost = exact_cost_fn(solver);

  const auto spread_patterns = std::vector<std::string>{"DID", "IDD", "III"};
  const auto orbits_at = [&](double M, const std::string& pattern) {
    const MonotoneMap map(split_shell_measure(out.eps, M), pattern);
    return std::pair<RadiiTuple, RadiiTuple>(map.orbit(M + 0.30), map.orbit(M + 0.70));
  };

  if (out.M_auto) {
    // doubling ladder until the swap tuples of every spread pattern sit in
    // the regime where the exact cost equals the frozen collinear cost
    double M = 100.0;
    bool accepted = false;
    for (; M <= 1.1e6; M *= 2.0) {
      double worst = 0.0;
      for (const auto& pat : spread_patterns) {
        const auto [ox, oy] = orbits_at(M, pat);
        worst = std::max(worst, worst_cpi_agreement(cost, ox, oy));
      }
      if (worst <= 1e-12) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      os << "no M up to 1e6 reached the frozen-cost regime; inconclusive\n";
      out.M = M;
      out.exit_code = 2;
      return out;
    }
    out.M = M;
    os << "auto M = " << fmt17(M) << "\n";
  } else {
    out.M = *M_opt;
  }

  // DDI: the two orbit triples near radius 1; the second is the limit of
  // orbits from the left of 1+eps, which lies in the closed support of the
  // induced plan.
  {
    const MonotoneMap map(split_shell_measure(out.eps, out.M), "DDI");
    const RadiiTuple x = map.orbit(1.0 + out.eps / 2.0);
    const RadiiTuple y(1.0 + out.eps, 1.0 + 3.0 * out.eps, 1.0 + 5.0 * out.eps);
    const auto reports = check_pair(cost, x, y);
    const ViolationReport& rep = reports[4];  // p = {3}
    PatternOutcome po;
    po.pattern = "DDI";
    po.method = "taylor-pair";
    po.lhs = rep.lhs;
    po.rhs = rep.rhs;
    po.gap = rep.gap;
    po.cpi_agreement = 0.0;
    po.conclusive = rep.gap < violation_threshold(rep.lhs, solver.value_tol);
    out.patterns.push_back(po);
  }

  for (const auto& pat : spread_patterns) {
    const auto [ox, oy] = orbits_at(out.M, pat);
    PatternOutcome po;
    po.pattern = pat;
    po.method = "spread-pair";
    po.cpi_agreement = worst_cpi_agreement(cost, ox, oy);
    const auto reports = check_pair(cost, ox, oy);
    const ViolationReport* best = &reports[0];
    for (const auto& r : reports)
      if (r.gap < best->gap) best = &r;
    po.lhs = best->lhs;
    po.rhs = best->rhs;
    po.gap = best->gap;
    po.conclusive = best->gap < violation_threshold(best->lhs, solver.value_tol) &&
                    po.cpi_agreement <= 1e-10;
    out.patterns.push_back(po);
  }

  out.exit_code = 0;
  for (const auto& po : out.patterns)
    if (!po.conclusive) out.exit_code = 2;

  os << "eps = " << fmt17(out.eps) << ", M = " << fmt17(out.M) << "\n";
  for (const auto& po : out.patterns) {
    os << "  " << po.pattern << " [" << po.method << "] gap = " << fmt17(po.gap)
       << (po.method == "spread-pair"
               ? " (frozen-cost agreement " + fmt17(po.cpi_agreement) + ")"
               : "")
       << (po.conclusive ? "  VIOLATED" : "  inconclusive") << "\n";
  }
  os << (out.exit_code == 0
             ? "no map of the cyclical monotone class is optimal for this measure\n"
             : "at least one pattern is inconclusive at tolerance\n");

  if (!out_path.empty()) {
    Meta meta("ceclass");
    meta.add("eps", out.eps);
    meta.add("M", out.M);
    meta.add("M_auto", std::string(out.M_auto ? "true" : "false"));
    meta.add_solver(solver, 3);
    std::ostringstream body;
    body << meta.json_line() << "\n";
    for (const auto& po : out.patterns) {
      nlohmann::json j{{"pattern", po.pattern},     {"method", po.method},
                       {"lhs", po.lhs},             {"rhs", po.rhs},
                       {"gap", po.gap},             {"cpi_agreement", po.cpi_agreement},
                       {"conclusive", po.conclusive}};
      body << j.dump() << "\n";
    }
    write_file(out_path, body.str());
    os << "report written to " << out_path << "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

SpreadOnset find_spread_onset(const std::vector<std::array<double, 2>>& small_pairs,
                              double m_start, double m_cap, double target,
                              const SolverOptions& solver) {
  SpreadOnset out;
  for (double M = m_start; M <= m_cap; M *= 2.0) {
    double worst = 0.0;
    for (const auto& p : small_pairs) {
      for (double r3 : {M, M + 1.0, 3.0 * M}) {
        const RadiiTuple r(p[0], p[1], r3);
        worst = std::max(worst, std::fabs(exact_cost(r, solver).value - cost_pi(r)));
      }
    }
    if (worst <= target) {
      out.M = M;
      out.worst_disagreement = worst;
      out.found = true;
      return out;
    }
    out.worst_disagreement = worst;
  }
  return out;
}

ExampleCpiResult cmd_example_cpi(std::optional<double> M_opt, int samples, unsigned seed,
                                 const SolverOptions& solver, const std::string& out_path,
                                 std::ostream& os) {
  ExampleCpiResult out;
  out.samples = samples;
  out.seed = seed;
  out.M_auto = !M_opt.has_value();
  if (out.M_auto) {
    const SpreadOnset onset = find_spread_onset(
        {{1.0, 3.0}, {1.0, 4.0}, {2.0, 3.0}, {2.0, 4.0}, {1.5, 3.5}}, 10.0, 1e5, 1e-12,
        solver);
    if (!onset.found) {
      os << "no M reached the frozen-cost regime; inconclusive\n";
      out.exit_code = 2;
      return out;
    }
    out.M = onset.M;
    os << "auto M = " << fmt17(out.M) << " (worst frozen-cost disagreement "
       << fmt17(onset.worst_disagreement) << ")\n";
  } else {
    out.M = *M_opt;
  }

  const RadialMeasure rho({{1.0, 2.0, 1.0 / 3.0},
                           {3.0, 4.0, 1.0 / 3.0},
                           {out.M, out.M + 1.0, 1.0 / 3.0}});
  const MonotoneMap map(rho, "DDI");
  const CostFn cost = exact_cost_fn(solver);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto sample_orbit = [&]() {
    while (true) {
      try {
        return map.orbit(rho.quantile(unif(rng)));
      } catch (const BreakpointHit&) {
        continue;  // measure-zero; redraw deterministically
      }
    }
  };

  out.min_gap = std::numeric_limits<double>::infinity();
  std::vector<ViolationReport> violations;
  for (int s = 0; s < samples; ++s) {
    const RadiiTuple x = sample_orbit();
    const RadiiTuple y = sample_orbit();
    const auto reports = check_pair(cost, x, y);
    for (size_t mask = 0; mask < reports.size(); ++mask) {
      const auto& rep = reports[mask];
      ++out.checks;
      // the empty and full subsets only restate the pair; track the margin
      // over the swaps that actually rearrange coordinates
      if (mask != 0 && mask != reports.size() - 1)
        out.min_gap = std::min(out.min_gap, rep.gap);
      if (rep.gap < violation_threshold(rep.lhs, solver.value_tol))
        violations.push_back(rep);
    }
  }
  out.violations = static_cast<int>(violations.size());
  if (samples == 0) out.min_gap = 0.0;
  out.exit_code = out.violations == 0 ? 0 : 2;

  os << "sampled " << samples << " orbit pairs (" << out.checks
     << " swap checks), violations: " << out.violations
     << ", smallest gap: " << fmt17(out.min_gap) << "\n"
     << "sampled evidence only; c-monotonicity certified on the drawn pairs, not proved\n";

  if (!out_path.empty()) {
    Meta meta("example-cpi");
    meta.add("M", out.M);
    meta.add("M_auto", std::string(out.M_auto ? "true" : "false"));
    meta.add("samples", static_cast<long>(samples));
    meta.add("seed", static_cast<long>(seed));
    meta.add("evidence", std::string("sampled; not a proof"));
    meta.add_solver(solver, 3);
    std::ostringstream body;
    body << meta.json_line() << "\n";
    nlohmann::json j{{"violations", out.violations},
                     {"checks", out.checks},
                     {"min_gap", out.min_gap}};
    body << j.dump() << "\n";
    for (const auto& rep : violations) body << to_json_line(rep) << "\n";
    write_file(out_path, body.str());
    os << "report written to " << out_path << "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

RegionResult cmd_region(double r1, double lo, double hi, int steps,
                        const std::string& out_csv, std::ostream& os) {
  if (steps < 2) throw Error("region grid needs at least 2 steps");
  Meta meta("region");
  meta.add("r1", r1);
  meta.add("lo", lo);
  meta.add("hi", hi);
  meta.add("steps", static_cast<long>(steps));

  std::ostringstream body;
  body << meta.csv_header() << "r2,r3,margin,sign\n";
  RegionResult out;
  for (int i = 0; i < steps; ++i) {
    const double r2 = lo + i * (hi - lo) / (steps - 1);
    for (int j = 0; j < steps; ++j) {
      const double r3 = lo + j * (hi - lo) / (steps - 1);
      if (!(r1 <= r2 && r2 <= r3)) continue;
      const double m = hessian_pi_determinant_margin(RadiiTuple(r1, r2, r3));
      body << fmt17(r2) << "," << fmt17(r3) << "," << fmt17(m) << ","
           << (m > 0 ? 1 : (m < 0 ? -1 : 0)) << "\n";
      ++out.rows;
    }
  }
  if (!out_csv.empty()) {
    write_file(out_csv, body.str());
    os << out.rows << " grid rows written to " << out_csv << "\n";
  }
  out.exit_code = 0;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb) || fa * fb > 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double wrap_pm_pi(double t) {
  t = std::fmod(t + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  return t - kPi;
}

}  // namespace

CurvesResult cmd_curves(double r1, double r2, double r3, int sweep,
                        const std::string& out_csv, std::ostream& os) {
  CurvesResult out;
  out.sweep = sweep;
  const auto d3 = [](double a, double b, double u) {
    const double d2 = a * a + b * b - 2.0 * a * b * std::cos(u);
    return d2 * std::sqrt(d2);
  };
  // families: near-axis curves solve the charge-1 balance in theta2;
  // diagonal curves solve the 2-3 balance in psi = theta2 - theta3
  std::vector<std::array<double, 4>> th2(static_cast<size_t>(sweep));
  for (int s = 0; s < sweep; ++s) {
    const double t3 = (s + 0.5) * 2.0 * kPi / sweep;
    const double K = r1 * r3 * std::sin(t3) / d3(r1, r3, t3);
    const auto fV = [&](double t2) { return r1 * r2 * std::sin(t2) / d3(r1, r2, t2) + K; };
    const double L = r1 * std::sin(t3) / d3(r1, r3, t3) * r3;
    const auto fD = [&](double psi) {
      return r2 * r3 * std::sin(psi) / d3(r2, r3, psi) - L;
    };
    th2[static_cast<size_t>(s)][0] = bisect(fV, -kPi / 2, kPi / 2);
    th2[static_cast<size_t>(s)][1] = bisect(fV, kPi / 2, 3 * kPi / 2);
    const double p0 = bisect(fD, -kPi / 2, kPi / 2);
    const double ppi = bisect(fD, kPi / 2, 3 * kPi / 2);
    th2[static_cast<size_t>(s)][2] = std::isnan(p0) ? p0 : p0 + t3;
    th2[static_cast<size_t>(s)][3] = std::isnan(ppi) ? ppi : ppi + t3;
    for (int b = 0; b < 4; ++b)
      if (std::isnan(th2[static_cast<size_t>(s)][static_cast<size_t>(b)])) ++out.solver_gaps;
    // deviation of the near-axis family from {0, pi}
    if (!std::isnan(th2[static_cast<size_t>(s)][0]))
      out.max_vertical_deviation =
          std::max(out.max_vertical_deviation, std::fabs(th2[static_cast<size_t>(s)][0]));
    if (!std::isnan(th2[static_cast<size_t>(s)][1]))
      out.max_vertical_deviation = std::max(
          out.max_vertical_deviation, std::fabs(th2[static_cast<size_t>(s)][1] - kPi));
  }

  // count circular sign changes of the wrapped difference per branch pair
  for (int bv = 0; bv < 2; ++bv) {
    for (int bd = 2; bd < 4; ++bd) {
      int crossings = 0;
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (int s = 0; s <= sweep; ++s) {
        const auto& row = th2[static_cast<size_t>(s % sweep)];
        const double a = row[static_cast<size_t>(bv)], b = row[static_cast<size_t>(bd)];
        if (std::isnan(a) || std::isnan(b)) continue;
        const double diff = wrap_pm_pi(a - b);
        if (!std::isnan(prev) && prev * diff < 0.0 && std::fabs(prev - diff) < kPi)
          ++crossings;
        prev = diff;
      }
      out.intersections += crossings;
    }
  }

  Meta meta("curves");
  meta.add("r1", r1);
  meta.add("r2", r2);
  meta.add("r3", r3);
  meta.add("sweep", static_cast<long>(sweep));
  std::ostringstream body;
  body << meta.csv_header() << "family,branch,theta3,theta2\n";
  const char* fam[4] = {"axis", "axis", "diagonal", "diagonal"};
  const char* br[4] = {"0", "pi", "0", "pi"};
  for (int b = 0; b < 4; ++b)
    for (int s = 0; s < sweep; ++s) {
      const double t3 = (s + 0.5) * 2.0 * kPi / sweep;
      body << fam[b] << "," << br[b] << "," << fmt17(t3) << ","
           << fmt17(th2[static_cast<size_t>(s)][static_cast<size_t>(b)]) << "\n";
    }
  if (!out_csv.empty()) {
    write_file(out_csv, body.str());
    os << "curves written to " << out_csv << "\n";
  }
  os << "intersections: " << out.intersections << ", solver gaps: " << out.solver_gaps
     << ", max near-axis deviation: " << fmt17(out.max_vertical_deviation) << "\n";
  out.exit_code = 0;
  return out;
}

// ---------------------------------------------------------------------------

FourMargResult cmd_fourmarg(double eps, const SolverOptions& solver,
                            const std::string& out_path, std::ostream& os) {
  FourMargResult out;
  out.eps = eps;
  out.reference_partition = {1, 5, 6, 7};

  if (eps == 0.0) {
    const double c4 = exact_cost(RadiiTuple(1.0, 1.0, 1.0, 1.0), solver).value;
    out.best_value = 2.0 * c4;
    out.matches_reference = false;
    out.achieved_by_map = false;
    out.exit_code = 0;
    os << "degenerate eps = 0: every partition ties at " << fmt17(out.best_value) << "\n";
    return out;
  }

  std::array<double, 8> radii{};
  for (int i = 0; i < 8; ++i) radii[static_cast<size_t>(i)] = 1.0 + (2 * i + 1) * eps;
  const CostFn cost = exact_cost_fn(solver);
  const RadiiTuple x(radii[0], radii[2], radii[4], radii[6]);
  const RadiiTuple y(radii[1], radii[3], radii[5], radii[7]);
  auto reports = check_pair_strong(cost, x, y);

  std::vector<size_t> order(reports.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return reports[a].rhs < reports[b].rhs; });

  const auto& best = reports[order[0]];
  out.best_value = best.rhs;
  for (int idx : best.detail) out.best_partition.push_back(idx + 1);
  const std::vector<int> ref_detail = {0, 4, 5, 6};
  out.matches_reference = best.detail == ref_detail;
  for (size_t pos = 0; pos < order.size(); ++pos)
    if (reports[order[pos]].detail == ref_detail) out.reference_rank = static_cast<int>(pos) + 1;

  // orbit pairings realizable by the cyclical monotone maps on the matching
  // uniform shell
  const RadialMeasure rho = RadialMeasure::uniform(1.0, 1.0 + 16.0 * eps);
  const AtomGrid grid = discretize(rho, 8);
  std::vector<std::pair<std::string, std::vector<int>>> map_pairings;
  for (const auto& pat : MonotoneMap::admissible_patterns(4)) {
    const MonotoneMap map(rho, pat);
    const RadiiTuple orb = map.orbit(grid.atoms[0]);
    std::vector<int> indices;
    for (int c = 0; c < 4; ++c) {
      const auto it = std::min_element(
          radii.begin(), radii.end(), [&](double a, double b) {
            return std::fabs(a - orb[c]) < std::fabs(b - orb[c]);
          });
      indices.push_back(static_cast<int>(it - radii.begin()) + 1);
    }
    std::sort(indices.begin(), indices.end());
    if (indices == out.best_partition) out.achieved_by_map = true;
    map_pairings.emplace_back(pat, indices);
  }

  out.exit_code = out.matches_reference ? 0 : 2;
  os << "eps = " << fmt17(eps) << "\nminimizing partition (indices with r1): {";
  for (size_t i = 0; i < out.best_partition.size(); ++i)
    os << (i ? "," : "") << out.best_partition[i];
  os << "}  value = " << fmt17(out.best_value) << "\n";
  os << "asymptotic reference {1,5,6,7} rank: " << out.reference_rank << " of "
     << reports.size() << "\n";
  if (!out.matches_reference)
    os << "DISCREPANCY: numerics at this eps select a different partition than the "
          "asymptotic claim; see the ranked artifact\n";
  os << "minimizer achievable by a cyclical monotone map: "
     << (out.achieved_by_map ? "yes" : "no") << "\n";
  for (const auto& [pat, idx] : map_pairings) {
    os << "  " << pat << " pairing {";
    for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << "}\n";
  }

  if (!out_path.empty()) {
    Meta meta("fourmarg");
    meta.add("eps", eps);
    meta.add_solver(solver, 4);
    std::ostringstream body;
    body << meta.json_line() << "\n";
    for (size_t pos = 0; pos < order.size(); ++pos) {
      const auto& rep = reports[order[pos]];
      std::vector<int> part;
      for (int idx : rep.detail) part.push_back(idx + 1);
      nlohmann::json j{{"rank", pos + 1}, {"partition", part}, {"value", rep.rhs}};
      body << j.dump() << "\n";
    }
    for (const auto& [pat, idx] : map_pairings) {
      nlohmann::json j{{"map", pat}, {"pairing", idx}};
      body << j.dump() << "\n";
    }
    write_file(out_path, body.str());
    os << "report written to " << out_path << "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

LpCommandResult cmd_lp(const RadialMeasure& rho, int n,
                       const std::vector<std::string>& patterns,
                       const SolverOptions& solver, const LpOptions& lp_opts,
                       const std::string& out_csv, std::ostream& os) {
  LpCommandResult out;
  out.report = compare(rho, n, patterns, exact_cost_fn(solver), lp_opts);

  os << "n = " << n << ", LP value = " << fmt17(out.report.lp_value) << " ("
     << out.report.lp_iterations
     << " simplex iterations, min reduced cost " << fmt17(out.report.lp_min_reduced_cost)
     << ")\n";
  for (const auto& row : out.report.rows)
    os << "  " << row.pattern << ": plan = " << fmt17(row.plan_value)
       << ", gap = " << fmt17(row.gap)
       << (row.support_on_graph ? " [LP support on this graph]" : "") << "\n";

  if (!out_csv.empty()) {
    Meta meta("lp");
    meta.add("n", static_cast<long>(n));
    meta.add("measure", rho.to_json());
    meta.add("lp.opt_tol", lp_opts.opt_tol);
    meta.add_solver(solver, 3);
    std::ostringstream body;
    body << meta.csv_header() << "pattern,plan_value,lp_value,gap,support_on_graph\n";
    for (const auto& row : out.report.rows)
      body << row.pattern << "," << fmt17(row.plan_value) << ","
           << fmt17(out.report.lp_value) << "," << fmt17(row.gap) << ","
           << (row.support_on_graph ? 1 : 0) << "\n";
    write_file(out_csv, body.str());
    os << "comparison written to " << out_csv << "\n";
  }
  out.exit_code = 0;
  return out;
}

}  // namespace mmot::cli
