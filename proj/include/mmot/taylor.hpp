#ifndef MMOT_TAYLOR_HPP
#define MMOT_TAYLOR_HPP

#include <array>

#include "mmot/coulomb.hpp"

namespace mmot {

// Radii parametrized as 1 + a_i * t; the probe must keep them positive.
struct TaylorProbe {
  std::array<double, 3> a{};
  double t = 0.0;
};

// Value and first three t-derivatives of t -> exact_cost(1 + a t) at t = 0.
struct ExpansionCoefficients {
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

// exact_cost(1 + a1 t, 1 + a2 t, 1 + a3 t).
double g_exact(const TaylorProbe& p, const SolverOptions& opts = {});

// Closed-form expansion coefficients. The sign of the cubic coefficient is
// pinned by the dilation identity c(l,l,l) = sqrt(3)/l, cross-checked by
// finite differences of g_exact in the tests.
ExpansionCoefficients g_derivatives_analytic(const std::array<double, 3>& a);

// First-order drift of the minimizing angles away from (2pi/3, -2pi/3).
std::array<double, 2> optimal_angle_rate(const std::array<double, 3>& a);

// Cost difference of the two pairings of the six radii 1 + k t,
// k = 0,1,2,3,4,5: [c(1,4,6-th) + c(2,3,5-th)] - [c(1,4,5-th) + c(2,3,6-th)].
// Negative values witness that the 145/236 pairing is not optimal.
double comparison_functional_F(double t, const SolverOptions& opts = {});
// Its analytic third derivative at 0: -284*sqrt(3)/125.
double comparison_functional_F_third();

// Swap functional for the two orbit triples (1+e/2, 1+7e/2, 1+9e/2) and
// (1+e, 1+3e, 1+5e) against the pairing that exchanges their third
// coordinates. Positive values witness the violation.
double comparison_functional_f(double eps, const SolverOptions& opts = {});
// Its analytic third derivative at 0: 71*sqrt(3)/100.
double comparison_functional_f_third();

// Largest t (within [t_lo, t_hi]) below which F stays negative, located by
// ladder scan plus bisection at 1e-3 relative resolution.
struct NegativeRangeEstimate {
  double t0 = 0.0;
  bool sign_change_found = false;  // false: F < 0 on the whole probed range
};
NegativeRangeEstimate estimate_negative_F_range(double t_lo = 1e-3, double t_hi = 1.0,
                                                const SolverOptions& opts = {});

struct AsymptoticCheck {
  double approx = 0.0;     // truncated expansion
  double reference = 0.0;  // exact_cost
};

// Two charges at radius 1, one at radius r:
// approx = 1/2 + 2/sqrt(1+r^2) - 4/r^4. Residual decays like o(r^-4).
AsymptoticCheck asymptotic_cost_two_near_one_far(double r, const SolverOptions& opts = {});

// One charge at radius 1, two at radius r:
// approx = 1/(2r) + 2/sqrt(1+r^2) - 4/r^3.
AsymptoticCheck asymptotic_cost_one_near_two_far(double r, const SolverOptions& opts = {});

// Linear drift of the four-marginal minimizing angles away from the base
// (pi/2, pi, 3pi/2) for radii 1 + a_i t. Branch-local: for some slope
// patterns a different charge ordering attains the global minimum.
std::array<double, 3> fourmarginal_angle_rate(const std::array<double, 4>& a);

}  // namespace mmot

#endif
