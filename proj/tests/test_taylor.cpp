#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mmot/taylor.hpp"
#include "oracles.hpp"

using namespace mmot;

namespace {
constexpr double kSqrt3 = 1.7320508075688772935274463415059;
constexpr double kPi = 3.14159265358979323846264338327950288;

double g_of_t(const std::array<double, 3>& a, double t) {
  return g_exact({a, t});
}
}  // namespace

TEST_CASE("g_exact: base point and dilation line") {
  CHECK(g_of_t({0, 3, 5}, 0.0) == doctest::Approx(kSqrt3).epsilon(1e-12));
  for (double t : {0.05, 0.2, 0.7})
    CHECK(g_of_t({1, 1, 1}, t) == doctest::Approx(kSqrt3 / (1.0 + t)).epsilon(1e-10));
  // dense-grid oracle for an asymmetric probe
  const auto oracle = oracles::dense_grid_minimize(RadiiTuple{1.0, 1.03, 1.05}, 512);
  CHECK(g_of_t({0, 3, 5}, 0.01) == doctest::Approx(oracle.value).epsilon(1e-11));
}

TEST_CASE("analytic coefficients: dilation oracle fixes every order") {
  // c(1+st, 1+st, 1+st) = sqrt(3)/(1+st) has derivatives
  // -s sqrt3, 2 s^2 sqrt3, -6 s^3 sqrt3; this pins the cubic sign.
  for (double s : {1.0, 2.0, -0.5}) {
    const auto c = g_derivatives_analytic({s, s, s});
    CHECK(c.g0 == doctest::Approx(kSqrt3).epsilon(1e-15));
    CHECK(c.g1 == doctest::Approx(-s * kSqrt3).epsilon(1e-13));
    CHECK(c.g2 == doctest::Approx(2.0 * s * s * kSqrt3).epsilon(1e-13));
    CHECK(c.g3 == doctest::Approx(-6.0 * s * s * s * kSqrt3).epsilon(1e-13));
  }
  const auto z = g_derivatives_analytic({0, 0, 0});
  CHECK(z.g1 == 0.0);
  CHECK(z.g2 == 0.0);
  CHECK(z.g3 == 0.0);
}

TEST_CASE("analytic coefficients: printed reference values") {
  const auto c = g_derivatives_analytic({0, 3, 5});
  CHECK(c.g1 == doctest::Approx(-8.0 / kSqrt3).epsilon(1e-14));
  CHECK(c.g2 == doctest::Approx(226.0 / (5.0 * kSqrt3)).epsilon(1e-14));
  // sign resolved against the dilation identity and the FD oracle
  CHECK(c.g3 == doctest::Approx(-153376.0 / (375.0 * kSqrt3)).epsilon(1e-14));
}

TEST_CASE("analytic coefficients match Richardson differences of g_exact") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<double, 3> a{slope(rng), slope(rng), slope(rng)};
    const auto c = g_derivatives_analytic(a);
    const auto f = [&](double t) { return g_of_t(a, t); };
    const double d1 = oracles::richardson(f, 0.0, 1, 1e-3);
    const double d2 = oracles::richardson(f, 0.0, 2, 5e-3);
    const double d3 = oracles::richardson(f, 0.0, 3, 1e-2);
    CHECK(c.g1 == doctest::Approx(d1).epsilon(1e-6).scale(std::fabs(d1) + 1e-6));
    CHECK(c.g2 == doctest::Approx(d2).epsilon(1e-4).scale(std::fabs(d2) + 1e-4));
    CHECK(c.g3 == doctest::Approx(d3).epsilon(1e-2).scale(std::fabs(d3) + 1e-2));
  }
}

TEST_CASE("optimal angle rate: closed form and argmin tracking") {
  {
    const auto r = optimal_angle_rate({1, 1, 1});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
  }
  {
    const auto r = optimal_angle_rate({0, 3, 5});
    CHECK(r[0] == doctest::Approx(7.0 / (5.0 * kSqrt3)).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(-1.0 / (5.0 * kSqrt3)).epsilon(1e-14));
  }
  // FD slope of the tracked argmin for a = (0,3,4)
  const std::array<double, 3> a{0, 3, 4};
  const auto rate = optimal_angle_rate(a);
  const auto argmin_at = [&](double t) {
    CostValue cv = exact_cost(RadiiTuple(1 + a[0] * t, 1 + a[1] * t, 1 + a[2] * t));
    AngleConfig th = cv.argmin;
    if (th[0] > kPi) th = th.reflected();  // track the branch with theta2 near +2pi/3
    return th;
  };
  const double h = 1e-3;
  const AngleConfig p = argmin_at(h), m = argmin_at(-h);
  for (int d = 0; d < 2; ++d) {
    const double fd = (p[d] - m[d]) / (2.0 * h);
    CHECK(rate[static_cast<size_t>(d)] ==
          doctest::Approx(fd).epsilon(1e-3).scale(std::fabs(fd) + 1e-3));
  }
}

TEST_CASE("pairing functional F: exact zeros and the cubic constant") {
  CHECK(comparison_functional_F(0.0) == 0.0);
  CHECK(comparison_functional_F_third() ==
        doctest::Approx(-284.0 * kSqrt3 / 125.0).epsilon(1e-13));
  // FD estimate within 1%
  const auto F = [](double t) { return comparison_functional_F(t); };
  const double fd3 = oracles::richardson(F, 0.0, 3, 1e-2);
  CHECK(fd3 == doctest::Approx(comparison_functional_F_third()).epsilon(0.01));
}

TEST_CASE("pairing functional F: negative with cubic decay") {
  const double f02 = comparison_functional_F(0.02);
  const double f01 = comparison_functional_F(0.01);
  const double f005 = comparison_functional_F(0.005);
  CHECK(f02 < 0.0);
  CHECK(f01 < 0.0);
  CHECK(f005 < 0.0);
  CHECK(f02 / f01 == doctest::Approx(8.0).epsilon(0.2));
  CHECK(f01 / f005 == doctest::Approx(8.0).epsilon(0.2));
  // ratio against the cubic limit at the smallest step
  const double limit = comparison_functional_F_third() / 6.0;
  CHECK(f005 / (0.005 * 0.005 * 0.005) == doctest::Approx(limit).epsilon(0.2));
}

TEST_CASE("swap functional f: positive with cubic decay") {
  CHECK(comparison_functional_f(0.0) == 0.0);
  CHECK(comparison_functional_f_third() ==
        doctest::Approx(71.0 * kSqrt3 / 100.0).epsilon(1e-13));
  const double f02 = comparison_functional_f(0.02);
  const double f01 = comparison_functional_f(0.01);
  const double f005 = comparison_functional_f(0.005);
  CHECK(f02 > 0.0);
  CHECK(f01 > 0.0);
  CHECK(f005 > 0.0);
  CHECK(f02 / f01 == doctest::Approx(8.0).epsilon(0.2));
  CHECK(f01 / f005 == doctest::Approx(8.0).epsilon(0.2));
  const auto fe = [](double e) { return comparison_functional_f(e); };
  const double fd3 = oracles::richardson(fe, 0.0, 3, 1e-2);
  CHECK(fd3 == doctest::Approx(comparison_functional_f_third()).epsilon(0.01));
}

TEST_CASE("negative range of F: no sign change in the probed window") {
  const auto est = estimate_negative_F_range(1e-3, 1.0);
  CHECK_FALSE(est.sign_change_found);
  CHECK(est.t0 == doctest::Approx(1.0));
}

TEST_CASE("asymptotics: two near charges, one far") {
  // formula arithmetic at r = 20 (note the two equidistant far pairs)
  const auto a20 = asymptotic_cost_two_near_one_far(20.0);
  CHECK(a20.approx ==
        doctest::Approx(0.5 + 2.0 / std::sqrt(401.0) - 4.0 / 160000.0).epsilon(1e-15));
  double prev = 1e30;
  for (double r : {5.0, 10.0, 20.0, 40.0}) {
    const auto res = asymptotic_cost_two_near_one_far(r);
    const double weighted = std::fabs(res.approx - res.reference) * r * r * r * r;
    CHECK(weighted < prev);
    prev = weighted;
  }
  // far-charge limit: the near pair at distance 2 is all that remains
  const auto big = asymptotic_cost_two_near_one_far(200.0);
  CHECK(std::fabs(big.reference - 0.5) < 0.011);
}

TEST_CASE("asymptotics: one near charge, two far") {
  const auto a20 = asymptotic_cost_one_near_two_far(20.0);
  CHECK(a20.approx ==
        doctest::Approx(1.0 / 40.0 + 2.0 / std::sqrt(401.0) - 4.0 / 8000.0).epsilon(1e-15));
  double prev = 1e30;
  for (double r : {5.0, 10.0, 20.0, 40.0}) {
    const auto res = asymptotic_cost_one_near_two_far(r);
    const double weighted = std::fabs(res.approx - res.reference) * r * r * r;
    CHECK(weighted < prev);
    prev = weighted;
  }
  const auto big = asymptotic_cost_one_near_two_far(200.0);
  CHECK(big.reference < 0.02);
}

namespace {

// Newton on the analytic gradient from a given start; test-side helper for
// tracking one stationary branch of the four-charge potential.
AngleConfig track_branch(const RadiiTuple& r, AngleConfig th) {
  for (int it = 0; it < 100; ++it) {
    const auto g = potential_angle_gradient(r, th);
    Eigen::Vector3d gv(g[0], g[1], g[2]);
    if (gv.lpNorm<Eigen::Infinity>() < 1e-13) break;
    const auto h = potential_angle_hessian(r, th);
    Eigen::Matrix3d H;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        H(a, b) = h[static_cast<size_t>(a) * 3 + static_cast<size_t>(b)];
    const Eigen::Vector3d step = H.fullPivLu().solve(gv);
    th = AngleConfig(th[0] - step[0], th[1] - step[1], th[2] - step[2]);
  }
  return th;
}

}  // namespace

TEST_CASE("four-marginal angle rate: closed form") {
  {
    const auto r = fourmarginal_angle_rate({1, 1, 1, 1});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
  }
  const double f = (6.0 - std::sqrt(2.0)) / 34.0;
  const auto r = fourmarginal_angle_rate({0, 1, 2, 3});
  CHECK(r[0] == doctest::Approx(4.0 * f).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(4.0 * f).epsilon(1e-14));
  CHECK(r[2] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("four-marginal angle rate: branch-tracked finite differences") {
  const AngleConfig base{kPi / 2, kPi, 3 * kPi / 2};
  for (const std::array<double, 4>& a :
       {std::array<double, 4>{0, 1, 2, 3}, std::array<double, 4>{1, 3, 5, 7}}) {
    const auto rate = fourmarginal_angle_rate(a);
    const double h = 1e-3;
    const auto at = [&](double t) {
      return track_branch(
          RadiiTuple(1 + a[0] * t, 1 + a[1] * t, 1 + a[2] * t, 1 + a[3] * t), base);
    };
    const AngleConfig p = at(h), m = at(-h);
    for (int d = 0; d < 3; ++d) {
      const double fd = (p[d] - m[d]) / (2.0 * h);
      CHECK(rate[static_cast<size_t>(d)] ==
            doctest::Approx(fd).epsilon(1e-2).scale(std::fabs(fd) + 1e-2));
    }
  }
}

TEST_CASE("four-marginal: equally spaced slopes leave the tracked branch") {
  // The linearized branch keeps the charges in radius order around the
  // square; for strictly increasing equally spaced radii the global
  // minimizer interleaves them instead, so the branch value is only an
  // upper bound for the cost.
  const double t = 1e-3;
  const RadiiTuple r(1 + t, 1 + 3 * t, 1 + 5 * t, 1 + 7 * t);
  const AngleConfig branch = track_branch(r, AngleConfig{kPi / 2, kPi, 3 * kPi / 2});
  const double branch_value = coulomb_potential(r, branch);
  const double global_value = exact_cost(r).value;
  CHECK(global_value < branch_value - 1e-9);
}
