#ifndef MMOT_COMMANDS_HPP
#define MMOT_COMMANDS_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmot/coulomb.hpp"
#include "mmot/lp.hpp"
#include "mmot/measures.hpp"
#include "mmot/monotonicity.hpp"
#include "mmot/taylor.hpp"

// Named experiments behind the CLI. Every command prints a human summary,
// optionally writes a machine-readable artifact with a full parameter
// header, and returns 0 (claim confirmed), 2 (inconclusive at tolerance)
// through its exit_code field; hard errors surface as exceptions.
namespace mmot::cli {

// shortest form that round-trips, capped at 17 significant digits
std::string fmt17(double v);

struct CostCommandResult {
  CostValue cost;
  double triangle = 0.0;
  std::optional<double> pi;
  int exit_code = 0;
};
CostCommandResult cmd_cost(const std::vector<double>& radii, const SolverOptions& solver,
                           std::ostream& os);

struct Ce145Result {
  double eps = 0.0;
  bool eps_auto = false;
  double t0 = 0.0;
  bool t0_sign_change = false;
  std::array<double, 6> radii{};
  double lhs = 0.0, rhs = 0.0, gap = 0.0;
  double gap_half = 0.0;       // same experiment at eps/2
  double scaling_ratio = 0.0;  // gap / gap_half; cubic regime gives ~8
  int exit_code = 2;
};
Ce145Result cmd_ce145(std::optional<double> eps, const SolverOptions& solver,
                      const std::string& out_path, std::ostream& os);

struct PatternOutcome {
  std::string pattern;
  std::string method;  // "taylor-pair" or "spread-pair"
  double lhs = 0.0, rhs = 0.0, gap = 0.0;
  double cpi_agreement = 0.0;  // max |exact - frozen| over the probed triples
  bool conclusive = false;
};
struct CeClassResult {
  double eps = 0.0;
  double M = 0.0;
  bool M_auto = false;
  std::vector<PatternOutcome> patterns;
  int exit_code = 2;
};
CeClassResult cmd_ceclass(std::optional<double> eps, std::optional<double> M,
                          const SolverOptions& solver, const std::string& out_path,
                          std::ostream& os);

struct ExampleCpiResult {
  double M = 0.0;
  bool M_auto = false;
  int samples = 0;
  unsigned seed = 0;
  long checks = 0;
  int violations = 0;
  double min_gap = 0.0;  // smallest gap seen across all swaps
  int exit_code = 2;
};
ExampleCpiResult cmd_example_cpi(std::optional<double> M, int samples, unsigned seed,
                                 const SolverOptions& solver, const std::string& out_path,
                                 std::ostream& os);

struct RegionResult {
  int rows = 0;
  int exit_code = 0;
};
RegionResult cmd_region(double r1, double lo, double hi, int steps,
                        const std::string& out_csv, std::ostream& os);

struct CurvesResult {
  int sweep = 0;
  int intersections = 0;
  int solver_gaps = 0;              // sweep nodes where a branch had no root
  double max_vertical_deviation = 0.0;  // of the near-axis family from {0, pi}
  int exit_code = 0;
};
CurvesResult cmd_curves(double r1, double r2, double r3, int sweep,
                        const std::string& out_csv, std::ostream& os);

struct FourMargResult {
  double eps = 0.0;
  std::vector<int> best_partition;       // 1-based orbit indices grouped with r1
  double best_value = 0.0;
  std::vector<int> reference_partition;  // the asymptotic claim {1,5,6,7}
  int reference_rank = 0;                // 1 = best
  bool matches_reference = false;
  bool achieved_by_map = false;  // some {D,I}^4 pairing equals the minimizer
  int exit_code = 2;
};
FourMargResult cmd_fourmarg(double eps, const SolverOptions& solver,
                            const std::string& out_path, std::ostream& os);

struct LpCommandResult {
  CompareReport report;
  int exit_code = 0;
};
LpCommandResult cmd_lp(const RadialMeasure& rho, int n,
                       const std::vector<std::string>& patterns,
                       const SolverOptions& solver, const LpOptions& lp_opts,
                       const std::string& out_csv, std::ostream& os);

// Smallest M on a doubling ladder from which the exact cost agrees with the
// frozen-angle cost on the probe triples (r1, r2, r3 >= M); used by the
// commands that need a spread-regime witness.
struct SpreadOnset {
  double M = 0.0;
  double worst_disagreement = 0.0;
  bool found = false;
};
SpreadOnset find_spread_onset(const std::vector<std::array<double, 2>>& small_pairs,
                              double m_start, double m_cap, double target,
                              const SolverOptions& solver);

}  // namespace mmot::cli

#endif
