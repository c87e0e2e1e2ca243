#include "mmot/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmot {

namespace {

constexpr double kCoincidenceDist = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

double circular_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

// Potential with full angle array (ang[0] = 0). Returns +inf instead of
// throwing when charges collide, which keeps grid scans branch-free.
double pot_or_inf(std::span<const double> r, const double* ang) {
  const int n = static_cast<int>(r.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 =
          r[i] * r[i] + r[j] * r[j] - 2.0 * r[i] * r[j] * std::cos(ang[i] - ang[j]);
      if (d2 < kCoincidenceDist * kCoincidenceDist) return kInf;
      total += 1.0 / std::sqrt(d2);
    }
  }
  return total;
}

void full_angles(const AngleConfig& a, double* ang) {
  ang[0] = 0.0;
  for (int i = 0; i < a.size(); ++i) ang[i + 1] = a[i];
}

// d/dtheta_i of the potential, i = 2..N, with theta_1 frozen at 0.
void gradient_arr(std::span<const double> r, const double* ang, double* g) {
  const int n = static_cast<int>(r.size());
  for (int i = 1; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double u = ang[i] - ang[j];
      const double d2 = r[i] * r[i] + r[j] * r[j] - 2.0 * r[i] * r[j] * std::cos(u);
      s -= r[i] * r[j] * std::sin(u) / (d2 * std::sqrt(d2));
    }
    g[i - 1] = s;
  }
}

void hessian_arr(std::span<const double> r, const double* ang, double* h) {
  const int n = static_cast<int>(r.size());
  const int m = n - 1;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (i == j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == i) continue;
          const double u = ang[i] - ang[k];
          const double cu = std::cos(u), su = std::sin(u);
          const double p = r[i] * r[k];
          const double d2 = r[i] * r[i] + r[k] * r[k] - 2.0 * p * cu;
          s += -p * cu / (d2 * std::sqrt(d2)) + 3.0 * p * p * su * su / (d2 * d2 * std::sqrt(d2));
        }
        h[(i - 1) * m + (i - 1)] = s;
      } else {
        const double u = ang[i] - ang[j];
        const double cu = std::cos(u), su = std::sin(u);
        const double p = r[i] * r[j];
        const double d2 = r[i] * r[i] + r[j] * r[j] - 2.0 * p * cu;
        h[(i - 1) * m + (j - 1)] =
            p * cu / (d2 * std::sqrt(d2)) - 3.0 * p * p * su * su / (d2 * d2 * std::sqrt(d2));
      }
    }
  }
}

// Gaussian elimination with partial pivoting for m <= 3. Returns false on
// a vanishing pivot.
bool solve_small(int m, double* a /*m*m, clobbered*/, double* b /*m, in/out*/) {
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int row = col + 1; row < m; ++row)
      if (std::fabs(a[row * m + col]) > std::fabs(a[piv * m + col])) piv = row;
    if (a[piv * m + col] == 0.0 || !std::isfinite(a[piv * m + col])) return false;
    if (piv != col) {
      for (int k = col; k < m; ++k) std::swap(a[piv * m + k], a[col * m + k]);
      std::swap(b[piv], b[col]);
    }
    for (int row = col + 1; row < m; ++row) {
      const double f = a[row * m + col] / a[col * m + col];
      for (int k = col; k < m; ++k) a[row * m + k] -= f * a[col * m + k];
      b[row] -= f * b[col];
    }
  }
  for (int row = m - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < m; ++k) s -= a[row * m + k] * b[k];
    b[row] = s / a[row * m + row];
  }
  return true;
}

// Newton iteration for a zero of the angle gradient. The iterate is kept on
// the torus; steps are clamped to 0.8 rad sup-norm. Termination needs both a
// small gradient and a small final step: for very spread radii the Hessian is
// nearly singular in one direction, and the gradient tolerance alone would
// leave the location fuzzy by more than the dedup radius.
bool newton_polish(std::span<const double> r, double* th, int m, double grad_tol,
                   int max_iter) {
  double ang[4], g[3], h[9], step[3];
  int polish_left = 6;
  bool grad_ok = false;
  for (int it = 0; it < max_iter; ++it) {
    ang[0] = 0.0;
    for (int i = 0; i < m; ++i) ang[i + 1] = th[i];
    if (!std::isfinite(pot_or_inf(r, ang))) return false;
    gradient_arr(r, ang, g);
    double gmax = 0.0;
    for (int i = 0; i < m; ++i) gmax = std::max(gmax, std::fabs(g[i]));
    if (!std::isfinite(gmax)) return false;
    grad_ok = gmax <= grad_tol;
    if (grad_ok && polish_left <= 0) return true;
    hessian_arr(r, ang, h);
    for (int i = 0; i < m; ++i) step[i] = g[i];
    if (!solve_small(m, h, step)) return grad_ok;
    double smax = 0.0;
    for (int i = 0; i < m; ++i) smax = std::max(smax, std::fabs(step[i]));
    if (!std::isfinite(smax)) return grad_ok;
    if (grad_ok) {
      if (smax <= 1e-9) return true;
      --polish_left;
    }
    if (smax > 0.8)
      for (int i = 0; i < m; ++i) step[i] *= 0.8 / smax;
    for (int i = 0; i < m; ++i) th[i] = wrap_angle(th[i] - step[i]);
  }
  return grad_ok;
}

struct GridScan {
  std::vector<double> values;      // flat lattice values (inf where singular)
  std::vector<int> start_cells;    // flat indices: local minima then best-K
  double best_value = kInf;
};

// Scans the (N-1)-torus on a G^(N-1) midpoint lattice. Newton starts are
// every discrete local minimum plus the K lowest cells; that covers all
// attraction basins the lattice can resolve.
GridScan scan_grid(std::span<const double> r, int G, int best_k) {
  const int n = static_cast<int>(r.size());
  const int m = n - 1;
  std::vector<double> ct(G), st(G);
  for (int g = 0; g < G; ++g) {
    const double t = (g + 0.5) * kTwoPi / G;
    ct[g] = std::cos(t);
    st[g] = std::sin(t);
  }
  size_t total = 1;
  for (int d = 0; d < m; ++d) total *= static_cast<size_t>(G);

  GridScan out;
  out.values.assign(total, kInf);
  int digit[3] = {0, 0, 0};
  for (size_t flat = 0; flat < total; ++flat) {
    // pairwise distances via the tables; charge 0 has (cos,sin) = (1,0)
    double cs[4] = {1.0, 0, 0, 0}, sn[4] = {0.0, 0, 0, 0};
    for (int d = 0; d < m; ++d) {
      cs[d + 1] = ct[digit[d]];
      sn[d + 1] = st[digit[d]];
    }
    double v = 0.0;
    for (int i = 0; i < n && std::isfinite(v); ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double cdiff = cs[i] * cs[j] + sn[i] * sn[j];
        const double d2 = r[i] * r[i] + r[j] * r[j] - 2.0 * r[i] * r[j] * cdiff;
        if (d2 < kCoincidenceDist * kCoincidenceDist) {
          v = kInf;
          break;
        }
        v += 1.0 / std::sqrt(d2);
      }
    }
    out.values[flat] = v;
    if (v < out.best_value) out.best_value = v;
    for (int d = 0; d < m; ++d) {
      if (++digit[d] < G) break;
      digit[d] = 0;
    }
  }

  // Discrete local minima (<= all wrapped neighbours).
  std::vector<int> locmin;
  for (size_t flat = 0; flat < total; ++flat) {
    const double v = out.values[flat];
    if (!std::isfinite(v)) continue;
    int dg[3];
    size_t rem = flat;
    for (int d = 0; d < m; ++d) {
      dg[d] = static_cast<int>(rem % G);
      rem /= G;
    }
    bool is_min = true;
    int off[3] = {-1, -1, -1};
    while (is_min) {
      bool all_zero = true;
      for (int d = 0; d < m; ++d) all_zero = all_zero && off[d] == 0;
      if (!all_zero) {
        size_t nb = 0, mult = 1;
        for (int d = 0; d < m; ++d) {
          const int q = (dg[d] + off[d] + G) % G;
          nb += static_cast<size_t>(q) * mult;
          mult *= static_cast<size_t>(G);
        }
        if (out.values[nb] < v) is_min = false;
      }
      int d = 0;
      for (; d < m; ++d) {
        if (++off[d] <= 1) break;
        off[d] = -1;
      }
      if (d == m) break;
    }
    if (is_min) locmin.push_back(static_cast<int>(flat));
  }

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.values[static_cast<size_t>(a)] < out.values[static_cast<size_t>(b)];
  });

  std::vector<char> used(total, 0);
  for (int f : locmin) {
    if (out.start_cells.size() >= 96) break;
    if (!used[static_cast<size_t>(f)]) {
      used[static_cast<size_t>(f)] = 1;
      out.start_cells.push_back(f);
    }
  }
  int taken = 0;
  for (int f : order) {
    if (taken >= std::max(best_k, 1) || out.start_cells.size() >= 96) break;
    if (!std::isfinite(out.values[static_cast<size_t>(f)])) break;
    if (!used[static_cast<size_t>(f)]) {
      used[static_cast<size_t>(f)] = 1;
      out.start_cells.push_back(f);
      ++taken;
    }
  }
  return out;
}

void cell_to_angles(int flat, int G, int m, double* th) {
  size_t rem = static_cast<size_t>(flat);
  for (int d = 0; d < m; ++d) {
    th[d] = (static_cast<double>(rem % G) + 0.5) * kTwoPi / G;
    rem /= static_cast<size_t>(G);
  }
}

struct FoundPoint {
  double th[3];
  double value;
};

bool near_duplicate(const FoundPoint& a, const double* th, int m, double tol) {
  for (int d = 0; d < m; ++d)
    if (circular_distance(a.th[d], th[d]) >= tol) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// RadiiTuple / AngleConfig

RadiiTuple::RadiiTuple(std::initializer_list<double> r) {
  if (r.size() != 3 && r.size() != 4)
    throw InvalidRadii("radii tuple needs 3 or 4 entries");
  n_ = static_cast<int>(r.size());
  std::copy(r.begin(), r.end(), r_.begin());
  validate();
}

RadiiTuple::RadiiTuple(std::span<const double> r) {
  if (r.size() != 3 && r.size() != 4)
    throw InvalidRadii("radii tuple needs 3 or 4 entries");
  n_ = static_cast<int>(r.size());
  std::copy(r.begin(), r.end(), r_.begin());
  validate();
}

RadiiTuple::RadiiTuple(double r1, double r2, double r3) : r_{r1, r2, r3, 0.0}, n_(3) {
  validate();
}

RadiiTuple::RadiiTuple(double r1, double r2, double r3, double r4)
    : r_{r1, r2, r3, r4}, n_(4) {
  validate();
}

void RadiiTuple::validate() const {
  for (int i = 0; i < n_; ++i)
    if (!(r_[static_cast<size_t>(i)] > 0.0) || !std::isfinite(r_[static_cast<size_t>(i)]))
      throw InvalidRadii("radii must be positive finite reals");
}

RadiiTuple RadiiTuple::sorted() const {
  RadiiTuple out = *this;
  std::sort(out.r_.begin(), out.r_.begin() + n_);
  return out;
}

RadiiTuple RadiiTuple::scaled(double lambda) const {
  RadiiTuple out = *this;
  for (int i = 0; i < n_; ++i) out.r_[static_cast<size_t>(i)] *= lambda;
  out.validate();
  return out;
}

AngleConfig::AngleConfig(std::initializer_list<double> theta) {
  if (theta.size() != 2 && theta.size() != 3)
    throw ArityMismatch("angle config needs 2 or 3 entries");
  m_ = static_cast<int>(theta.size());
  std::copy(theta.begin(), theta.end(), th_.begin());
}

AngleConfig::AngleConfig(std::span<const double> theta) {
  if (theta.size() != 2 && theta.size() != 3)
    throw ArityMismatch("angle config needs 2 or 3 entries");
  m_ = static_cast<int>(theta.size());
  std::copy(theta.begin(), theta.end(), th_.begin());
}

AngleConfig::AngleConfig(double t2, double t3) : th_{t2, t3, 0.0}, m_(2) {}
AngleConfig::AngleConfig(double t2, double t3, double t4) : th_{t2, t3, t4}, m_(3) {}

AngleConfig AngleConfig::normalized() const {
  AngleConfig out = *this;
  for (int i = 0; i < m_; ++i) out.th_[static_cast<size_t>(i)] = wrap_angle(out.th_[static_cast<size_t>(i)]);
  return out;
}

AngleConfig AngleConfig::reflected() const {
  AngleConfig out = *this;
  for (int i = 0; i < m_; ++i)
    out.th_[static_cast<size_t>(i)] = wrap_angle(-out.th_[static_cast<size_t>(i)]);
  return out;
}

double AngleConfig::torus_distance(const AngleConfig& a, const AngleConfig& b) {
  if (a.size() != b.size()) throw ArityMismatch("angle configs of different size");
  double d = 0.0;
  for (int i = 0; i < a.size(); ++i) d = std::max(d, circular_distance(a[i], b[i]));
  return d;
}

// ---------------------------------------------------------------------------
// Potential and derivatives

double coulomb_potential(const RadiiTuple& r, const AngleConfig& a) {
  if (a.size() != r.size() - 1)
    throw ArityMismatch("angle config does not match radii arity");
  double ang[4];
  full_angles(a, ang);
  const double v = pot_or_inf(r.values(), ang);
  if (!std::isfinite(v))
    throw CoincidentCharges("two charges closer than 1e-14");
  return v;
}

std::vector<double> potential_angle_gradient(const RadiiTuple& r, const AngleConfig& a) {
  coulomb_potential(r, a);  // coincidence guard
  double ang[4], g[3];
  full_angles(a, ang);
  gradient_arr(r.values(), ang, g);
  return std::vector<double>(g, g + (r.size() - 1));
}

std::vector<double> potential_angle_hessian(const RadiiTuple& r, const AngleConfig& a) {
  coulomb_potential(r, a);
  double ang[4], h[9];
  full_angles(a, ang);
  hessian_arr(r.values(), ang, h);
  const int m = r.size() - 1;
  return std::vector<double>(h, h + m * m);
}

// ---------------------------------------------------------------------------
// Global minimization

CostValue exact_cost(const RadiiTuple& r, const SolverOptions& opts) {
  const int n = r.size();
  const int m = n - 1;
  const int G = opts.grid_for(n);
  GridScan scan = scan_grid(r.values(), G, opts.starts);

  std::vector<FoundPoint> found;
  int best = -1;
  for (int cell : scan.start_cells) {
    double th[3];
    cell_to_angles(cell, G, m, th);
    if (!newton_polish(r.values(), th, m, opts.grad_tol, opts.max_iter)) continue;
    double ang[4] = {0.0, th[0], th[1], m == 3 ? th[2] : 0.0};
    const double v = pot_or_inf(r.values(), ang);
    if (!std::isfinite(v)) continue;
    bool dup = false;
    for (const auto& f : found)
      if (near_duplicate(f, th, m, opts.dedup_tol)) {
        dup = true;
        break;
      }
    if (dup) continue;
    FoundPoint fp;
    fp.th[0] = th[0];
    fp.th[1] = th[1];
    fp.th[2] = m == 3 ? th[2] : 0.0;
    fp.value = v;
    found.push_back(fp);
    if (best < 0 || v < found[static_cast<size_t>(best)].value)
      best = static_cast<int>(found.size()) - 1;
  }
  if (best < 0)
    throw ConvergenceFailure("no Newton start reached the gradient tolerance");
  const FoundPoint& fb = found[static_cast<size_t>(best)];
  if (fb.value > scan.best_value + 1e-6 * (1.0 + std::fabs(scan.best_value)))
    throw ConvergenceFailure("refined minimum lies above the grid scan; grid too coarse");

  CostValue out;
  out.value = fb.value;
  out.argmin = m == 2 ? AngleConfig(fb.th[0], fb.th[1])
                      : AngleConfig(fb.th[0], fb.th[1], fb.th[2]);
  out.argmin = out.argmin.normalized();
  out.stationary_count = static_cast<int>(found.size());
  return out;
}

double exact_cost_value(const RadiiTuple& r, const SolverOptions& opts) {
  return exact_cost(r, opts).value;
}

std::vector<StationaryPoint> stationary_points(const RadiiTuple& r,
                                               const SolverOptions& opts) {
  if (r.size() != 3) throw ArityMismatch("stationary_points expects 3 radii");
  const int m = 2;
  const int G = opts.grid_for(3);

  std::vector<FoundPoint> found;
  bool any_converged = false;
  for (int flat = 0; flat < G * G; ++flat) {
    double th[3];
    cell_to_angles(flat, G, m, th);
    if (!newton_polish(r.values(), th, m, opts.grad_tol, opts.max_iter)) continue;
    any_converged = true;
    double ang[4] = {0.0, th[0], th[1], 0.0};
    const double v = pot_or_inf(r.values(), ang);
    if (!std::isfinite(v)) continue;
    bool dup = false;
    for (const auto& f : found)
      if (near_duplicate(f, th, m, opts.dedup_tol)) {
        dup = true;
        break;
      }
    if (!dup) {
      FoundPoint fp;
      fp.th[0] = th[0];
      fp.th[1] = th[1];
      fp.th[2] = 0.0;
      fp.value = v;
      found.push_back(fp);
    }
  }
  if (!any_converged)
    throw ConvergenceFailure("no stationary point found on the torus");

  std::vector<StationaryPoint> out;
  out.reserve(found.size());
  for (const auto& f : found) {
    double ang[4] = {0.0, f.th[0], f.th[1], 0.0};
    double h[9];
    hessian_arr(r.values(), ang, h);
    // eigenvalues of the symmetric 2x2 [[a,b],[b,d]]
    const double a = h[0], b = h[1], d = h[3];
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const double lo = mean - disc, hi = mean + disc;
    StationaryPoint sp{AngleConfig(f.th[0], f.th[1]).normalized(), f.value,
                       StationaryKind::Saddle, {lo, hi, 0.0}};
    if (lo > 0.0)
      sp.kind = StationaryKind::Minimum;
    else if (hi < 0.0)
      sp.kind = StationaryKind::Maximum;
    out.push_back(sp);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const StationaryPoint& x, const StationaryPoint& y) {
                     return x.value < y.value;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// Frozen-angle surrogates

double cost_triangle(const RadiiTuple& r) {
  if (r.size() != 3) throw ArityMismatch("cost_triangle expects 3 radii");
  const double r1 = r[0], r2 = r[1], r3 = r[2];
  return 1.0 / std::sqrt(r1 * r1 + r1 * r2 + r2 * r2) +
         1.0 / std::sqrt(r2 * r2 + r2 * r3 + r3 * r3) +
         1.0 / std::sqrt(r1 * r1 + r1 * r3 + r3 * r3);
}

double cost_pi_ordered(double r1, double r2, double r3) {
  if (!(r3 - r1 > kCoincidenceDist * std::max(r3, 1.0)))
    throw DegenerateRadii("cost_pi needs r1 < r3");
  return 1.0 / (r1 + r2) + 1.0 / (r2 + r3) + 1.0 / (r3 - r1);
}

double cost_pi(const RadiiTuple& r) {
  if (r.size() != 3) throw ArityMismatch("cost_pi expects 3 radii");
  const RadiiTuple s = r.sorted();
  return cost_pi_ordered(s[0], s[1], s[2]);
}

double cost_1d(double v1, double v2, double v3) {
  const double d12 = std::fabs(v2 - v1);
  const double d23 = std::fabs(v3 - v2);
  const double d13 = std::fabs(v1 - v3);
  const double scale = std::max({std::fabs(v1), std::fabs(v2), std::fabs(v3), 1.0});
  if (d12 < kCoincidenceDist * scale || d23 < kCoincidenceDist * scale ||
      d13 < kCoincidenceDist * scale)
    throw CoincidentCharges("coincident line positions");
  return 1.0 / d12 + 1.0 / d23 + 1.0 / d13;
}

double hessian_pi_determinant_margin(const RadiiTuple& r) {
  if (r.size() != 3) throw ArityMismatch("margin expects 3 radii");
  const double r1 = r[0], r2 = r[1], r3 = r[2];
  if (!(r1 <= r2 && r2 <= r3))
    throw UnsortedRadii("margin expects r1 <= r2 <= r3");
  return r2 * r3 * (r3 - r2) - r1 * (r2 * r2 + 5.0 * r2 * r3 + r3 * r3) - r1 * r1 * r1;
}

}  // namespace mmot
