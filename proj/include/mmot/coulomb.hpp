#ifndef MMOT_COULOMB_HPP
#define MMOT_COULOMB_HPP

#include <array>
#include <initializer_list>
#include <span>
#include <vector>

#include "mmot/errors.hpp"

namespace mmot {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Ordered tuple of N positive radii, N = 3 or 4.
class RadiiTuple {
 public:
  RadiiTuple(std::initializer_list<double> r);
  explicit RadiiTuple(std::span<const double> r);
  RadiiTuple(double r1, double r2, double r3);
  RadiiTuple(double r1, double r2, double r3, double r4);

  int size() const { return n_; }
  double operator[](int i) const { return r_[static_cast<size_t>(i)]; }
  std::span<const double> values() const { return {r_.data(), static_cast<size_t>(n_)}; }

  RadiiTuple sorted() const;
  RadiiTuple scaled(double lambda) const;

 private:
  void validate() const;
  std::array<double, 4> r_{};
  int n_ = 0;
};

// N-1 angles locating charges 2..N relative to charge 1 (which sits at
// angle 0). Stored modulo 2*pi.
class AngleConfig {
 public:
  AngleConfig(std::initializer_list<double> theta);
  explicit AngleConfig(std::span<const double> theta);
  AngleConfig(double t2, double t3);
  AngleConfig(double t2, double t3, double t4);

  int size() const { return m_; }
  double operator[](int i) const { return th_[static_cast<size_t>(i)]; }
  std::span<const double> values() const { return {th_.data(), static_cast<size_t>(m_)}; }

  // Canonical representative with every angle in [0, 2*pi).
  AngleConfig normalized() const;
  // Mirror image 2*pi - theta (componentwise); the potential is invariant.
  AngleConfig reflected() const;

  // Sup over components of the circular distance.
  static double torus_distance(const AngleConfig& a, const AngleConfig& b);

 private:
  std::array<double, 3> th_{};
  int m_ = 0;
};

// Controls for the grid + Newton minimization over the angle torus.
struct SolverOptions {
  int grid = 0;             // points per axis; 0 = 64 for N=3, 32 for N=4
  int starts = 8;           // Newton starts taken from the best grid cells
  int max_iter = 80;        // Newton iteration cap per start
  double grad_tol = 1e-11;  // sup-norm gradient tolerance for stationarity
  double dedup_tol = 1e-6;  // torus distance below which points are merged
  double value_tol = 1e-12; // trust radius of the reported cost values

  int grid_for(int n_marginals) const { return grid > 0 ? grid : (n_marginals == 3 ? 64 : 32); }
};

struct CostValue {
  double value = 0.0;
  AngleConfig argmin{0.0, 0.0};
  int stationary_count = 0;  // distinct stationary points seen while minimizing
};

enum class StationaryKind { Minimum, Saddle, Maximum };

struct StationaryPoint {
  AngleConfig angles;
  double value = 0.0;
  StationaryKind kind = StationaryKind::Minimum;
  std::array<double, 3> eigenvalues{};  // ascending; first N-1 entries used
};

// Sum of inverse pairwise distances of charges r_i placed at angles
// (0, theta_2, ..., theta_N). Throws CoincidentCharges when two charges
// are closer than 1e-14.
double coulomb_potential(const RadiiTuple& r, const AngleConfig& a);

// Analytic gradient of the potential in the angles. Matches central
// finite differences; see tests.
std::vector<double> potential_angle_gradient(const RadiiTuple& r, const AngleConfig& a);

// Analytic Hessian, row-major (N-1)x(N-1), symmetric.
std::vector<double> potential_angle_hessian(const RadiiTuple& r, const AngleConfig& a);

// Global minimum of the potential over the angle torus: coarse grid scan,
// Newton refinement from the best cells and every discrete local minimum,
// deduplication, lowest value wins (ties: first in scan order).
CostValue exact_cost(const RadiiTuple& r, const SolverOptions& opts = {});

// Convenience overload.
double exact_cost_value(const RadiiTuple& r, const SolverOptions& opts = {});

// Surrogate with angles frozen at +-2*pi/3 (equilateral placement).
// Upper bound for exact_cost, tight exactly at equal radii.
double cost_triangle(const RadiiTuple& r);

// Surrogate with angles frozen at (pi, 0): smallest and largest radius
// collinear on opposite sides, middle radius opposite the smallest.
// Radii are sorted increasingly first. Throws DegenerateRadii when the
// largest equals the smallest.
double cost_pi(const RadiiTuple& r);
// Same formula on radii taken in the given order; requires r1 < r3.
double cost_pi_ordered(double r1, double r2, double r3);

// One dimensional Coulomb cost of three signed positions on a line.
double cost_1d(double v1, double v2, double v3);

// All stationary points of the potential on the torus (N = 3 only):
// Newton from every grid cell, dedup, classify by Hessian eigenvalues.
std::vector<StationaryPoint> stationary_points(const RadiiTuple& r,
                                               const SolverOptions& opts = {});

// r2*r3*(r3-r2) - r1*(r2^2 + 5 r2 r3 + r3^2) - r1^3 for sorted radii.
// Positive exactly when the angle Hessian at (pi, 0) is positive-definite.
double hessian_pi_determinant_margin(const RadiiTuple& r);

}  // namespace mmot

#endif
