#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmot/commands.hpp"

namespace {

void attach_solver_flags(CLI::App* cmd, mmot::SolverOptions* solver) {
  cmd->add_option("--grid", solver->grid, "angle grid points per axis (0 = default)");
  cmd->add_option("--starts", solver->starts, "Newton starts from the best grid cells");
  cmd->add_option("--grad-tol", solver->grad_tol, "stationarity tolerance (sup-norm)");
  cmd->add_option("--value-tol", solver->value_tol, "trust radius of cost values");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Radial Coulomb multimarginal transport: exact reduced cost, cyclical "
      "monotone maps, c-monotonicity checks and discrete Kantorovich solves"};
  app.require_subcommand(1);

  mmot::SolverOptions solver;

  // cost
  std::vector<double> radii;
  double n4 = 0.0;
  auto* cost = app.add_subcommand("cost", "exact cost of a radii tuple");
  cost->add_option("radii", radii, "three radii")->expected(3);
  cost->add_option("--n4", n4, "fourth radius (switches to 4 marginals)");
  attach_solver_flags(cost, &solver);

  // ce145
  std::optional<double> eps145;
  std::string out145;
  auto* ce145 = app.add_subcommand(
      "ce145", "narrow-shell witness: the DDI pairing is not c-monotone");
  ce145->add_option("--eps", eps145, "shell half-width parameter (auto when omitted)");
  ce145->add_option("--out", out145, "JSON-lines report path");
  attach_solver_flags(ce145, &solver);

  // ceclass
  std::optional<double> epsClass, Mclass;
  std::string outClass;
  auto* ceclass = app.add_subcommand(
      "ceclass", "split-shell witness: no cyclical monotone map is optimal");
  ceclass->add_option("--eps", epsClass, "shell width parameter (default 0.02)");
  ceclass->add_option("--M", Mclass, "far-shell location (auto when omitted)");
  ceclass->add_option("--out", outClass, "JSON-lines report path");
  attach_solver_flags(ceclass, &solver);

  // example-cpi
  std::optional<double> Mcpi;
  int samples = 10000;
  unsigned seed = 20240801u;
  std::string outCpi;
  auto* excpi = app.add_subcommand(
      "example-cpi", "sampled c-monotonicity certificate for the spread DDI map");
  excpi->add_option("--M", Mcpi, "far-cell location (auto when omitted)");
  excpi->add_option("--samples", samples, "number of orbit pairs");
  excpi->add_option("--seed", seed, "RNG seed");
  excpi->add_option("--out", outCpi, "JSON-lines report path");
  attach_solver_flags(excpi, &solver);

  // region
  double r1 = 1.0, lo = 1.0, hi = 15.0;
  int steps = 200;
  std::string outRegion = "region.csv";
  auto* region = app.add_subcommand(
      "region",
      "positivity margin of the collinear Hessian over (r2, r3); CSV columns: "
      "r2, r3, margin, sign");
  region->add_option("--r1", r1, "smallest radius (default 1)");
  region->add_option("--lo", lo, "grid lower bound");
  region->add_option("--hi", hi, "grid upper bound");
  region->add_option("--steps", steps, "grid steps per axis");
  region->add_option("--out", outRegion, "CSV path");

  // curves
  std::vector<double> curveR{1.0, 3.5, 60.0};
  int sweep = 720;
  std::string outCurves = "curves.csv";
  auto* curves = app.add_subcommand(
      "curves",
      "stationarity curve families on the angle torus; CSV columns: family "
      "(axis|diagonal), branch (0|pi), theta3, theta2 (nan marks a solver gap)");
  curves->add_option("--r", curveR, "three radii")->expected(3);
  curves->add_option("--sweep", sweep, "theta3 sweep resolution");
  curves->add_option("--out", outCurves, "CSV path");

  // fourmarg
  double eps4 = 0.005;
  std::string out4;
  auto* fourmarg = app.add_subcommand(
      "fourmarg", "four-marginal partition study on eight equally spaced radii");
  fourmarg->add_option("--eps", eps4, "spacing parameter (default 0.005)");
  fourmarg->add_option("--out", out4, "JSON-lines report path");
  attach_solver_flags(fourmarg, &solver);

  // lp
  std::string measurePath;
  int n = 12;
  std::string patterns = "all";
  std::string outLp = "lp_compare.csv";
  auto* lp = app.add_subcommand(
      "lp",
      "discrete Kantorovich optimum against the map-induced plans; CSV "
      "columns: pattern, plan_value, lp_value, gap, support_on_graph");
  lp->add_option("--measure", measurePath, "measure JSON file")->required();
  lp->add_option("--n", n, "atoms per marginal");
  lp->add_option("--patterns", patterns, "comma list of patterns or 'all'");
  lp->add_option("--out", outLp, "CSV path");
  attach_solver_flags(lp, &solver);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cost->parsed()) {
      std::vector<double> r = radii;
      if (cost->count("--n4")) r.push_back(n4);
      return mmot::cli::cmd_cost(r, solver, std::cout).exit_code;
    }
    if (ce145->parsed())
      return mmot::cli::cmd_ce145(eps145, solver, out145, std::cout).exit_code;
    if (ceclass->parsed())
      return mmot::cli::cmd_ceclass(epsClass, Mclass, solver, outClass, std::cout)
          .exit_code;
    if (excpi->parsed())
      return mmot::cli::cmd_example_cpi(Mcpi, samples, seed, solver, outCpi, std::cout)
          .exit_code;
    if (region->parsed())
      return mmot::cli::cmd_region(r1, lo, hi, steps, outRegion, std::cout).exit_code;
    if (curves->parsed())
      return mmot::cli::cmd_curves(curveR[0], curveR[1], curveR[2], sweep, outCurves,
                                   std::cout)
          .exit_code;
    if (fourmarg->parsed())
      return mmot::cli::cmd_fourmarg(eps4, solver, out4, std::cout).exit_code;
    if (lp->parsed()) {
      const mmot::RadialMeasure rho = mmot::RadialMeasure::load(measurePath);
      std::vector<std::string> pats;
      if (patterns == "all") {
        pats = mmot::MonotoneMap::admissible_patterns(3);
      } else {
        std::stringstream ss(patterns);
        std::string item;
        while (std::getline(ss, item, ',')) pats.push_back(item);
      }
      return mmot::cli::cmd_lp(rho, n, pats, solver, {}, outLp, std::cout).exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
