#ifndef MMOT_LP_HPP
#define MMOT_LP_HPP

#include <array>
#include <string>
#include <vector>

#include "mmot/coulomb.hpp"
#include "mmot/measures.hpp"

namespace mmot {

// Equal-mass quantile midpoints of a radial measure; every atom carries
// mass 1/n.
struct AtomGrid {
  std::vector<double> atoms;

  int size() const { return static_cast<int>(atoms.size()); }
  double weight() const { return 1.0 / static_cast<double>(atoms.size()); }
};

AtomGrid discretize(const RadialMeasure& rho, int n);

// Dense symmetric n^3 cost tensor over an atom grid; built once per sorted
// index triple.
class CostTensor {
 public:
  CostTensor(const AtomGrid& grid, const CostFn& cost);

  int n() const { return n_; }
  double operator()(int i, int j, int k) const {
    return flat_[(static_cast<size_t>(i) * n_ + static_cast<size_t>(j)) * n_ +
                 static_cast<size_t>(k)];
  }
  double at_flat(size_t c) const { return flat_[c]; }

 private:
  int n_ = 0;
  std::vector<double> flat_;
};

struct PlanEntry {
  int i = 0, j = 0, k = 0;
  double mass = 0.0;
};

// Nonnegative mass over the atom grid cube with all three marginals uniform.
struct DiscretePlan {
  int n = 0;
  std::vector<PlanEntry> entries;
};

std::array<std::vector<double>, 3> plan_marginals(const DiscretePlan& plan);
double plan_cost(const DiscretePlan& plan, const CostTensor& tensor);
std::string plan_to_json_lines(const DiscretePlan& plan);

struct LpOptions {
  double opt_tol = 1e-9;      // reduced-cost optimality certificate
  long max_iter = 500000;
  size_t max_cells = 1000000; // resource guard on n^3
};

struct LpResult {
  DiscretePlan plan;
  double value = 0.0;
  long iterations = 0;
  double min_reduced_cost = 0.0;  // >= -opt_tol at termination
};

// Exact optimum of min <c, gamma> over plans with uniform marginals, by
// revised simplex over all n^3 columns. Two redundant marginal rows are
// dropped so every basis is square; the lexicographic ratio test keeps the
// heavily degenerate iteration from cycling or stalling.
LpResult solve_mmot(const CostTensor& tensor, const LpOptions& opts = {});

// Plan concentrated on the orbit graph of a map: mass 1/n at
// (atom_i, nearest(T(atom_i)), nearest(T^2(atom_i))). Fails rather than
// repairs when nearest-atom rounding breaks a marginal.
DiscretePlan plan_from_map(const MonotoneMap& map, const AtomGrid& grid);

struct CompareRow {
  std::string pattern;
  double plan_value = 0.0;
  double gap = 0.0;  // plan_value - lp_value
  bool support_on_graph = false;
};

struct CompareReport {
  int n = 0;
  double lp_value = 0.0;
  long lp_iterations = 0;
  double lp_min_reduced_cost = 0.0;
  std::vector<CompareRow> rows;
  DiscretePlan lp_plan;
};

// LP optimum against every pattern's map-induced plan on the same grid.
CompareReport compare(const RadialMeasure& rho, int n,
                      const std::vector<std::string>& patterns, const CostFn& cost,
                      const LpOptions& opts = {});

}  // namespace mmot

#endif
