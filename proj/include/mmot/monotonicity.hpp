#ifndef MMOT_MONOTONICITY_HPP
#define MMOT_MONOTONICITY_HPP

#include <array>
#include <string>
#include <vector>

#include "mmot/coulomb.hpp"
#include "mmot/measures.hpp"

namespace mmot {

// Subset p of coordinate positions {1, ..., N}. Coordinates in p are kept,
// the others are exchanged between the two tuples.
struct SwapPattern {
  unsigned mask = 0;  // bit i-1 set <=> position i belongs to p
  int n = 3;

  bool contains(int position) const { return (mask >> (position - 1)) & 1u; }
  std::vector<int> positions() const;
};

std::pair<RadiiTuple, RadiiTuple> swap_coordinates(const RadiiTuple& x,
                                                   const RadiiTuple& y,
                                                   const SwapPattern& p);

struct ViolationReport {
  enum class Kind { Subset, Partition };
  Kind kind = Kind::Subset;
  RadiiTuple x{1, 1, 1};
  RadiiTuple y{1, 1, 1};
  // Subset: kept positions (1-based). Partition: 0-based indices into the
  // ascending union of coordinates forming the set that holds the smallest.
  std::vector<int> detail;
  double lhs = 0.0;  // cost(x) + cost(y)
  double rhs = 0.0;  // cost of the rearranged pair
  double gap = 0.0;  // rhs - lhs; negative marks a violation of (x, y)
};

std::string to_json_line(const ViolationReport& report);

// One report per subset p of {1..N}, in mask order. The pair is c-monotone
// when every gap clears -tol.
std::vector<ViolationReport> check_pair(const CostFn& cost, const RadiiTuple& x,
                                        const RadiiTuple& y);

// One report per unordered balanced partition of the 2N coordinates
// (10 for N = 3, 35 for N = 4), lexicographic in the index set containing
// the smallest coordinate. Requires all 2N coordinates pairwise distinct.
std::vector<ViolationReport> check_pair_strong(const CostFn& cost, const RadiiTuple& x,
                                               const RadiiTuple& y);

// Smallest rhs; ties resolve to the earliest (lexicographically smallest)
// entry.
ViolationReport minimizing_report(const std::vector<ViolationReport>& reports);

bool pair_is_c_monotone(const std::vector<ViolationReport>& reports, double tol);

// Violation threshold used throughout: gap < -10 * value_tol * (1 + |lhs|).
double violation_threshold(double lhs, double value_tol);

struct ViolationSearchSpec {
  int points_per_cell = 64;  // quantile lattice resolution inside the first cell
  int window = 8;            // pair two orbits at most this many lattice steps apart
  bool exhaustive = false;   // all pairs instead of the window
  bool include_strong = true;
  double value_tol = 1e-12;
};

// Pairs orbits drawn from a deterministic quantile lattice and reports every
// swap or partition whose gap certifies a violation, most negative first.
std::vector<ViolationReport> search_violations(const MonotoneMap& map, const CostFn& cost,
                                               const ViolationSearchSpec& spec = {});

struct PartitionInequalityResult {
  bool holds = false;
  // rhs - lhs against the pairings 146/235, 136/245, 135/246.
  std::array<double, 3> gaps{};
  // worst disagreement between the frozen-angle cost and its line
  // reformulation across the four pairings
  double cross_check_residual = 0.0;
};

// For sorted 0 < r1 < ... < r6 checks that the 145/236 pairing of the
// frozen-angle cost beats the three displayed alternatives.
PartitionInequalityResult cpi_partition_inequality(const std::array<double, 6>& r);

}  // namespace mmot

#endif
