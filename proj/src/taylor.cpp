#include "mmot/taylor.hpp"

#include <cmath>

namespace mmot {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415059;

RadiiTuple probe_radii(const std::array<double, 3>& a, double t) {
  return RadiiTuple(1.0 + a[0] * t, 1.0 + a[1] * t, 1.0 + a[2] * t);
}

}  // namespace

double g_exact(const TaylorProbe& p, const SolverOptions& opts) {
  return exact_cost(probe_radii(p.a, p.t), opts).value;
}

ExpansionCoefficients g_derivatives_analytic(const std::array<double, 3>& a) {
  const double a1 = a[0], a2 = a[1], a3 = a[2];
  ExpansionCoefficients c;
  c.g0 = kSqrt3;
  c.g1 = -(a1 + a2 + a3) / kSqrt3;
  c.g2 = (4.0 * (a1 * a1 + a2 * a2 + a3 * a3) + 6.0 * (a1 * a2 + a2 * a3 + a3 * a1)) /
         (5.0 * kSqrt3);
  const double cubes = a1 * a1 * a1 + a2 * a2 * a2 + a3 * a3 * a3;
  const double mixed = a1 * a1 * a2 + a1 * a2 * a2 + a2 * a2 * a3 + a2 * a3 * a3 +
                       a3 * a3 * a1 + a3 * a1 * a1;
  // Overall sign fixed by the dilation identity: a = (1,1,1) must give -6*sqrt(3).
  c.g3 = -(308.0 * cubes + 888.0 * mixed + 498.0 * a1 * a2 * a3) / (375.0 * kSqrt3);
  return c;
}

std::array<double, 2> optimal_angle_rate(const std::array<double, 3>& a) {
  const double f = 1.0 / (5.0 * kSqrt3);
  return {f * (-a[0] - a[1] + 2.0 * a[2]), f * (a[0] - 2.0 * a[1] + a[2])};
}

double comparison_functional_F(double t, const SolverOptions& opts) {
  return g_exact({{0, 3, 5}, t}, opts) + g_exact({{1, 2, 4}, t}, opts) -
         g_exact({{0, 3, 4}, t}, opts) - g_exact({{1, 2, 5}, t}, opts);
}

double comparison_functional_F_third() {
  const auto c = [](std::array<double, 3> a) { return g_derivatives_analytic(a).g3; };
  return c({0, 3, 5}) + c({1, 2, 4}) - c({0, 3, 4}) - c({1, 2, 5});
}

double comparison_functional_f(double eps, const SolverOptions& opts) {
  const SolverOptions& o = opts;
  const double lhs = exact_cost_value(RadiiTuple(1 + eps / 2, 1 + 7 * eps / 2, 1 + 9 * eps / 2), o) +
                     exact_cost_value(RadiiTuple(1 + eps, 1 + 3 * eps, 1 + 5 * eps), o);
  const double rhs = exact_cost_value(RadiiTuple(1 + eps / 2, 1 + 7 * eps / 2, 1 + 5 * eps), o) +
                     exact_cost_value(RadiiTuple(1 + eps, 1 + 3 * eps, 1 + 9 * eps / 2), o);
  return lhs - rhs;
}

double comparison_functional_f_third() {
  const auto c = [](std::array<double, 3> a) { return g_derivatives_analytic(a).g3; };
  return c({0.5, 3.5, 4.5}) + c({1, 3, 5}) - c({0.5, 3.5, 5}) - c({1, 3, 4.5});
}

NegativeRangeEstimate estimate_negative_F_range(double t_lo, double t_hi,
                                                const SolverOptions& opts) {
  NegativeRangeEstimate out;
  double prev = t_lo;
  double prev_val = comparison_functional_F(prev, opts);
  if (prev_val >= 0.0) {
    out.t0 = 0.0;
    out.sign_change_found = true;
    return out;
  }
  double t = t_lo;
  while (t < t_hi) {
    t = std::min(t * 1.5, t_hi);
    const double v = comparison_functional_F(t, opts);
    if (v >= 0.0) {
      // bisect the bracket [prev, t] to 1e-3 relative
      double lo = prev, hi = t;
      while ((hi - lo) > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (comparison_functional_F(mid, opts) < 0.0)
          lo = mid;
        else
          hi = mid;
      }
      out.t0 = lo;
      out.sign_change_found = true;
      return out;
    }
    prev = t;
    if (t >= t_hi) break;
  }
  out.t0 = t_hi;
  out.sign_change_found = false;
  return out;
}

AsymptoticCheck asymptotic_cost_two_near_one_far(double r, const SolverOptions& opts) {
  AsymptoticCheck out;
  out.approx = 0.5 + 2.0 / std::sqrt(1.0 + r * r) - 4.0 / (r * r * r * r);
  out.reference = exact_cost_value(RadiiTuple(1.0, 1.0, r), opts);
  return out;
}

AsymptoticCheck asymptotic_cost_one_near_two_far(double r, const SolverOptions& opts) {
  AsymptoticCheck out;
  out.approx = 1.0 / (2.0 * r) + 2.0 / std::sqrt(1.0 + r * r) - 4.0 / (r * r * r);
  out.reference = exact_cost_value(RadiiTuple(1.0, r, r), opts);
  return out;
}

std::array<double, 3> fourmarginal_angle_rate(const std::array<double, 4>& a) {
  const double f = (6.0 - std::sqrt(2.0)) / 34.0;
  return {f * (-a[0] - a[1] + a[2] + a[3]), f * (2.0 * a[3] - 2.0 * a[1]),
          f * (a[0] - a[1] - a[2] + a[3])};
}

}  // namespace mmot
