#ifndef MMOT_MEASURES_HPP
#define MMOT_MEASURES_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmot/coulomb.hpp"
#include "mmot/errors.hpp"

namespace mmot {

struct MeasurePiece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

// Piecewise-constant probability density on finitely many disjoint
// intervals of the positive half-line. Total mass must be 1 (within 1e-12);
// the measure is non-atomic by construction.
class RadialMeasure {
 public:
  explicit RadialMeasure(std::vector<MeasurePiece> pieces);

  static RadialMeasure uniform(double lo, double hi);

  // Parses a JSON array of {"lo":., "hi": ., "density": .}.
  static RadialMeasure from_json(std::istream& in);
  static RadialMeasure load(const std::string& path);
  std::string to_json() const;

  const std::vector<MeasurePiece>& pieces() const { return pieces_; }
  double support_lo() const { return pieces_.front().lo; }
  double support_hi() const { return pieces_.back().hi; }

  double cdf(double x) const;

  // Inverse CDF. Where the CDF is flat (a gap between pieces) the value at
  // the shared mass level is the start of the next piece, so quantile(q)
  // always lies in the support.
  double quantile(double q) const;

  // True when x lies inside a positive-density piece.
  bool in_support(double x) const;

 private:
  std::vector<MeasurePiece> pieces_;
  std::vector<double> cum_;  // mass accumulated before each piece
};

// Radii splitting the measure into N cells of mass 1/N.
std::vector<double> breakpoints(const RadialMeasure& rho, int n_marginals);

using CostFn = std::function<double(const RadiiTuple&)>;

// Cyclical transport map of the {D,I}^N class: cell k is rearranged onto
// cell k+1 (mod N), monotone increasing for 'I' and decreasing for 'D'.
// Only patterns whose N-fold composition is the identity are admissible.
class MonotoneMap {
 public:
  MonotoneMap(RadialMeasure rho, std::string pattern);

  static bool pattern_admissible(const std::string& pattern);
  // All admissible patterns of the given length, lexicographic.
  static std::vector<std::string> admissible_patterns(int n_marginals);

  int marginals() const { return n_; }
  const std::string& pattern() const { return pattern_; }
  const RadialMeasure& measure() const { return rho_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  double operator()(double x) const;

  // (x, T(x), ..., T^{N-1}(x)). Throws BreakpointHit within 1e-12 of a
  // breakpoint, where the map is two-valued.
  RadiiTuple orbit(double x) const;

  // Mass-coordinate image under one application of the map.
  double mass_step(double u) const;

  // Full transport integral of cost over the measure by the equal-mass
  // midpoint rule with n_quad nodes.
  double map_cost(const CostFn& cost, int n_quad) const;

 private:
  RadialMeasure rho_;
  std::string pattern_;
  int n_ = 0;
  std::vector<double> breaks_;
};

}  // namespace mmot

#endif
