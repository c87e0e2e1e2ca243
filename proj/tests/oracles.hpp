// Test-only oracles, kept independent of the library code paths they check:
// finite-difference derivatives with Richardson extrapolation, a dense-grid
// torus minimizer, and exhaustive vertex enumeration for tiny transport LPs.
#ifndef MMOT_TEST_ORACLES_HPP
#define MMOT_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mmot/coulomb.hpp"
#include "mmot/lp.hpp"

namespace oracles {

using Fn1 = std::function<double(double)>;

// Central stencils of order h^2 for the first three derivatives.
inline double stencil(const Fn1& f, double x, int order, double h) {
  switch (order) {
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
             (2.0 * h * h * h);
    default:
      throw std::logic_error("unsupported derivative order");
  }
}

// Richardson extrapolation over the step pair {2h, h}; the O(h^2) error of
// the central stencils cancels, leaving O(h^4).
inline double richardson(const Fn1& f, double x, int order, double h) {
  const double d_h = stencil(f, x, order, h);
  const double d_2h = stencil(f, x, order, 2.0 * h);
  return (4.0 * d_h - d_2h) / 3.0;
}

// Dense-lattice global minimization over the angle torus with a
// finite-difference Newton polish; shares only the potential evaluation with
// the library.
struct DenseMinimum {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> angles;
};

inline double pot_guarded(const mmot::RadiiTuple& r, const std::vector<double>& th) {
  try {
    return mmot::coulomb_potential(r, mmot::AngleConfig(std::span<const double>(th)));
  } catch (const mmot::CoincidentCharges&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline DenseMinimum dense_grid_minimize(const mmot::RadiiTuple& r, int G = 512) {
  const int m = r.size() - 1;
  DenseMinimum best;
  std::vector<double> th(static_cast<size_t>(m));
  std::vector<int> digit(static_cast<size_t>(m), 0);
  while (true) {
    for (int d = 0; d < m; ++d)
      th[static_cast<size_t>(d)] = (digit[static_cast<size_t>(d)] + 0.5) * mmot::kTwoPi / G;
    const double v = pot_guarded(r, th);
    if (v < best.value) {
      best.value = v;
      best.angles = th;
    }
    int d = 0;
    for (; d < m; ++d) {
      if (++digit[static_cast<size_t>(d)] < G) break;
      digit[static_cast<size_t>(d)] = 0;
    }
    if (d == m) break;
  }

  // FD Newton polish
  std::vector<double> cur = best.angles;
  const double hg = 1e-6, hh = 1e-4;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd g(m);
    Eigen::MatrixXd H(m, m);
    const double f0 = pot_guarded(r, cur);
    if (!std::isfinite(f0)) break;
    for (int a = 0; a < m; ++a) {
      auto shift = cur;
      shift[static_cast<size_t>(a)] += hg;
      const double fp = pot_guarded(r, shift);
      shift[static_cast<size_t>(a)] -= 2.0 * hg;
      const double fm = pot_guarded(r, shift);
      g[a] = (fp - fm) / (2.0 * hg);
    }
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        auto s = cur;
        if (a == b) {
          s[static_cast<size_t>(a)] += hh;
          const double fp = pot_guarded(r, s);
          s[static_cast<size_t>(a)] -= 2.0 * hh;
          const double fm = pot_guarded(r, s);
          H(a, a) = (fp - 2.0 * f0 + fm) / (hh * hh);
        } else {
          s = cur;
          s[static_cast<size_t>(a)] += hh;
          s[static_cast<size_t>(b)] += hh;
          const double fpp = pot_guarded(r, s);
          s[static_cast<size_t>(b)] -= 2.0 * hh;
          const double fpm = pot_guarded(r, s);
          s[static_cast<size_t>(a)] -= 2.0 * hh;
          const double fmm = pot_guarded(r, s);
          s[static_cast<size_t>(b)] += 2.0 * hh;
          const double fmp = pot_guarded(r, s);
          H(a, b) = H(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * hh * hh);
        }
      }
    if (g.norm() < 1e-12) break;
    Eigen::VectorXd step = H.fullPivLu().solve(g);
    if (!step.allFinite()) break;
    if (step.lpNorm<Eigen::Infinity>() > 0.5) step *= 0.5 / step.lpNorm<Eigen::Infinity>();
    for (int a = 0; a < m; ++a) cur[static_cast<size_t>(a)] -= step[a];
    const double v = pot_guarded(r, cur);
    if (v < best.value) {
      best.value = v;
      best.angles = cur;
    }
  }
  return best;
}

// Exhaustive basic-solution enumeration of the reduced 3-marginal transport
// system (rows: n + (n-1) + (n-1)); exact for n <= 3.
inline double brute_force_lp_value(const mmot::CostTensor& t) {
  const int n = t.n();
  const int m = 3 * n - 2;
  const int cols = n * n * n;
  const auto col_rows = [&](int c, int rows[3], int& cnt) {
    const int i = c / (n * n), j = (c / n) % n, k = c % n;
    cnt = 0;
    rows[cnt++] = i;
    if (j < n - 1) rows[cnt++] = n + j;
    if (k < n - 1) rows[cnt++] = 2 * n - 1 + k;
  };
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) pick[static_cast<size_t>(i)] = i;
  Eigen::MatrixXd B(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(m, 1.0 / n);
  while (true) {
    B.setZero();
    int rows[3], cnt;
    for (int c = 0; c < m; ++c) {
      col_rows(pick[static_cast<size_t>(c)], rows, cnt);
      for (int q = 0; q < cnt; ++q) B(rows[q], c) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(b);
      bool feasible = true;
      for (int c = 0; c < m; ++c)
        if (x[c] < -1e-10) {
          feasible = false;
          break;
        }
      if (feasible) {
        double v = 0.0;
        for (int c = 0; c < m; ++c)
          v += std::max(x[c], 0.0) * t.at_flat(static_cast<size_t>(pick[static_cast<size_t>(c)]));
        best = std::min(best, v);
      }
    }
    int pos = m - 1;
    while (pos >= 0 && pick[static_cast<size_t>(pos)] == cols - m + pos) --pos;
    if (pos < 0) break;
    ++pick[static_cast<size_t>(pos)];
    for (int q = pos + 1; q < m; ++q)
      pick[static_cast<size_t>(q)] = pick[static_cast<size_t>(q - 1)] + 1;
  }
  return best;
}

}  // namespace oracles

#endif
