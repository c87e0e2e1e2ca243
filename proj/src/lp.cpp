#include "mmot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

namespace mmot {

AtomGrid discretize(const RadialMeasure& rho, int n) {
  if (n < 1) throw Error("discretize needs n >= 1");
  AtomGrid out;
  out.atoms.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) out.atoms.push_back(rho.quantile((i - 0.5) / n));
  for (size_t i = 1; i < out.atoms.size(); ++i)
    if (!(out.atoms[i] > out.atoms[i - 1]))
      throw Error("atoms are not strictly increasing; measure too concentrated for n");
  return out;
}

CostTensor::CostTensor(const AtomGrid& grid, const CostFn& cost) : n_(grid.size()) {
  const size_t n = static_cast<size_t>(n_);
  flat_.assign(n * n * n, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      for (int k = j; k < n_; ++k) {
        const double v = cost(RadiiTuple(grid.atoms[static_cast<size_t>(i)],
                                         grid.atoms[static_cast<size_t>(j)],
                                         grid.atoms[static_cast<size_t>(k)]));
        const int idx[3] = {i, j, k};
        int perm[3] = {0, 1, 2};
        std::sort(perm, perm + 3);
        do {
          flat_[(static_cast<size_t>(idx[perm[0]]) * n + static_cast<size_t>(idx[perm[1]])) * n +
                static_cast<size_t>(idx[perm[2]])] = v;
        } while (std::next_permutation(perm, perm + 3));
      }
}

std::array<std::vector<double>, 3> plan_marginals(const DiscretePlan& plan) {
  std::array<std::vector<double>, 3> out;
  for (auto& v : out) v.assign(static_cast<size_t>(plan.n), 0.0);
  for (const auto& e : plan.entries) {
    out[0][static_cast<size_t>(e.i)] += e.mass;
    out[1][static_cast<size_t>(e.j)] += e.mass;
    out[2][static_cast<size_t>(e.k)] += e.mass;
  }
  return out;
}

double plan_cost(const DiscretePlan& plan, const CostTensor& tensor) {
  double total = 0.0;
  for (const auto& e : plan.entries) total += e.mass * tensor(e.i, e.j, e.k);
  return total;
}

std::string plan_to_json_lines(const DiscretePlan& plan) {
  std::ostringstream out;
  for (const auto& e : plan.entries) {
    nlohmann::json j{{"i", e.i}, {"j", e.j}, {"k", e.k}, {"mass", e.mass}};
    out << j.dump() << "\n";
  }
  return out.str();
}

namespace {

// Revised simplex working state for the 3-marginal transportation LP.
// Rows: n for the first marginal, n-1 each for the other two (the dropped
// rows are implied by total mass), so the constraint matrix has full row
// rank and basic plans carry at most 3n-2 entries. The basis inverse is
// refactorized from scratch every iteration: the bases here are small
// (m = 3n-2) and the long runs of degenerate pivots on these heavily
// degenerate instances would otherwise accumulate update drift.
class Simplex {
 public:
  Simplex(const CostTensor& tensor, const LpOptions& opts)
      : t_(tensor), opts_(opts), n_(tensor.n()), m_(3 * tensor.n() - 2) {
    cols_ = static_cast<size_t>(n_) * n_ * n_;
    xb_ = Eigen::VectorXd::Constant(m_, 1.0 / n_);
    basis_.resize(static_cast<size_t>(m_));
    for (int r = 0; r < m_; ++r) basis_[static_cast<size_t>(r)] = cols_ + static_cast<size_t>(r);
    is_basic_.assign(cols_, 0);
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
  }

  void column_rows(size_t c, int rows[3], int& cnt) const {
    const int i = static_cast<int>(c / (static_cast<size_t>(n_) * n_));
    const int j = static_cast<int>((c / static_cast<size_t>(n_)) % static_cast<size_t>(n_));
    const int k = static_cast<int>(c % static_cast<size_t>(n_));
    cnt = 0;
    rows[cnt++] = i;
    if (j < n_ - 1) rows[cnt++] = n_ + j;
    if (k < n_ - 1) rows[cnt++] = 2 * n_ - 1 + k;
  }

  double phase_cost(size_t c, bool phase1) const {
    if (c >= cols_) return phase1 ? 1.0 : 0.0;  // artificial
    return phase1 ? 0.0 : t_.at_flat(c);
  }

  void refactorize() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    int rows[3], cnt;
    for (int r = 0; r < m_; ++r) {
      const size_t v = basis_[static_cast<size_t>(r)];
      if (v >= cols_) {
        B(static_cast<int>(v - cols_), r) = 1.0;
      } else {
        column_rows(v, rows, cnt);
        for (int q = 0; q < cnt; ++q) B(rows[q], r) = 1.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) throw Error("simplex basis became singular");
    binv_ = lu.inverse();
    xb_ = binv_ * Eigen::VectorXd::Constant(m_, 1.0 / n_);
  }

  // One simplex phase; returns the final minimum reduced cost.
  double run_phase(bool phase1) {
    Eigen::VectorXd y(m_);
    while (true) {
      if (iterations_ >= opts_.max_iter)
        throw ConvergenceFailure("simplex iteration limit reached");
      // duals y = c_B^T B^{-1}
      y.setZero();
      for (int r = 0; r < m_; ++r) {
        const double cb = phase_cost(basis_[static_cast<size_t>(r)], phase1);
        if (cb != 0.0) y.noalias() += cb * binv_.row(r).transpose();
      }
      // full pricing scan over every real column
      size_t enter = cols_;
      double best_rc = -(phase1 ? 1e-10 : opts_.opt_tol);
      min_reduced_cost_ = 0.0;
      int rows[3], cnt;
      for (size_t c = 0; c < cols_; ++c) {
        if (is_basic_[c]) continue;
        column_rows(c, rows, cnt);
        double rc = phase_cost(c, phase1);
        for (int q = 0; q < cnt; ++q) rc -= y[rows[q]];
        if (rc < min_reduced_cost_) min_reduced_cost_ = rc;
        if (rc < best_rc) {
          best_rc = rc;
          enter = c;
        }
      }
      if (enter == cols_) return min_reduced_cost_;

      // direction d = B^{-1} A_enter
      column_rows(enter, rows, cnt);
      Eigen::VectorXd d = Eigen::VectorXd::Zero(m_);
      for (int q = 0; q < cnt; ++q) d += binv_.col(rows[q]);

      const int leave = lexicographic_leave(d);
      if (leave < 0) throw Error("simplex detected an unbounded direction");

      replace_basis(leave, enter);
      refactorize();
      ++iterations_;
    }
  }

  // Leaving-variable rule: minimum ratio with lexicographic tie resolution
  // over the rows of [x_B | B^{-1}]. The rhs of every marginal row is the
  // same 1/n, so plain ratio ties are pervasive and Bland-style index rules
  // crawl; the lexicographic order breaks every tie (rows of B^{-1} are
  // independent) and excludes cycling.
  int lexicographic_leave(const Eigen::VectorXd& d) const {
    int leave = -1;
    for (int r = 0; r < m_; ++r) {
      if (d[r] <= 1e-9) continue;
      if (leave < 0) {
        leave = r;
        continue;
      }
      const double ra = std::max(xb_[r], 0.0) / d[r];
      const double rb = std::max(xb_[leave], 0.0) / d[leave];
      const double tie = 1e-11 * (1.0 + std::fabs(rb));
      if (ra < rb - tie) {
        leave = r;
      } else if (ra <= rb + tie) {
        for (int c = 0; c < m_; ++c) {
          const double qa = binv_(r, c) / d[r];
          const double qb = binv_(leave, c) / d[leave];
          if (std::fabs(qa - qb) <= 1e-11 * (1.0 + std::fabs(qb))) continue;
          if (qa < qb) leave = r;
          break;
        }
      }
    }
    return leave;
  }

  void replace_basis(int leave, size_t enter) {
    const size_t old = basis_[static_cast<size_t>(leave)];
    if (old < cols_) is_basic_[old] = 0;
    basis_[static_cast<size_t>(leave)] = enter;
    if (enter < cols_) is_basic_[enter] = 1;
  }

  // Degenerate pivots that replace a zero-level artificial by any real
  // column with a usable element in its row.
  void drive_out_artificials() {
    int rows[3], cnt;
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<size_t>(r)] < cols_) continue;
      bool replaced = false;
      for (size_t c = 0; c < cols_ && !replaced; ++c) {
        if (is_basic_[c]) continue;
        column_rows(c, rows, cnt);
        double piv = 0.0;
        for (int q = 0; q < cnt; ++q) piv += binv_(r, rows[q]);
        if (std::fabs(piv) > 1e-7) {
          replace_basis(r, c);
          refactorize();
          replaced = true;
        }
      }
      if (!replaced)
        throw Error("could not drive an artificial out of the basis");
    }
  }

  LpResult finish() {
    LpResult out;
    out.plan.n = n_;
    for (int r = 0; r < m_; ++r) {
      const size_t v = basis_[static_cast<size_t>(r)];
      if (v >= cols_ || xb_[r] <= 1e-14) continue;
      PlanEntry e;
      e.i = static_cast<int>(v / (static_cast<size_t>(n_) * n_));
      e.j = static_cast<int>((v / static_cast<size_t>(n_)) % static_cast<size_t>(n_));
      e.k = static_cast<int>(v % static_cast<size_t>(n_));
      e.mass = xb_[r];
      out.plan.entries.push_back(e);
    }
    std::sort(out.plan.entries.begin(), out.plan.entries.end(),
              [&](const PlanEntry& a, const PlanEntry& b) {
                const auto fa = (static_cast<size_t>(a.i) * n_ + a.j) * static_cast<size_t>(n_) + a.k;
                const auto fb = (static_cast<size_t>(b.i) * n_ + b.j) * static_cast<size_t>(n_) + b.k;
                return fa < fb;
              });
    out.value = 0.0;
    for (const auto& e : out.plan.entries) out.value += e.mass * t_(e.i, e.j, e.k);
    out.iterations = iterations_;
    out.min_reduced_cost = min_reduced_cost_;
    return out;
  }

  double phase1_objective() const {
    double s = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[static_cast<size_t>(r)] >= cols_) s += xb_[r];
    return s;
  }

 private:
  const CostTensor& t_;
  LpOptions opts_;
  int n_, m_;
  size_t cols_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::vector<size_t> basis_;
  std::vector<char> is_basic_;
  long iterations_ = 0;
  double min_reduced_cost_ = 0.0;
};

}  // namespace

LpResult solve_mmot(const CostTensor& tensor, const LpOptions& opts) {
  const size_t cells = static_cast<size_t>(tensor.n()) * tensor.n() * tensor.n();
  if (cells > opts.max_cells)
    throw ResourceLimit("n^3 exceeds the configured cell limit");

  Simplex s(tensor, opts);
  s.run_phase(true);
  if (s.phase1_objective() > 1e-8)
    throw Error("phase 1 failed to reach feasibility");
  s.drive_out_artificials();
  const double min_rc = s.run_phase(false);
  LpResult out = s.finish();
  out.min_reduced_cost = min_rc;

  // certificate: marginals of the returned basic plan
  const auto marg = plan_marginals(out.plan);
  const double w = 1.0 / tensor.n();
  for (const auto& side : marg)
    for (double v : side)
      if (std::fabs(v - w) > 1e-9)
        throw Error("optimal plan violates a marginal constraint");
  return out;
}

DiscretePlan plan_from_map(const MonotoneMap& map, const AtomGrid& grid) {
  if (map.marginals() != 3) throw ArityMismatch("plan_from_map expects a 3-cycle map");
  const int n = grid.size();
  const auto nearest = [&](double x) {
    const auto it = std::lower_bound(grid.atoms.begin(), grid.atoms.end(), x);
    if (it == grid.atoms.begin()) return 0;
    if (it == grid.atoms.end()) return n - 1;
    const int hi = static_cast<int>(it - grid.atoms.begin());
    return (x - grid.atoms[static_cast<size_t>(hi - 1)] <=
            grid.atoms[static_cast<size_t>(hi)] - x)
               ? hi - 1
               : hi;
  };

  DiscretePlan plan;
  plan.n = n;
  std::vector<int> hit_j(static_cast<size_t>(n), 0), hit_k(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const RadiiTuple orb = map.orbit(grid.atoms[static_cast<size_t>(i)]);
    PlanEntry e;
    e.i = i;
    e.j = nearest(orb[1]);
    e.k = nearest(orb[2]);
    e.mass = grid.weight();
    ++hit_j[static_cast<size_t>(e.j)];
    ++hit_k[static_cast<size_t>(e.k)];
    plan.entries.push_back(e);
  }
  for (int v = 0; v < n; ++v)
    if (hit_j[static_cast<size_t>(v)] != 1 || hit_k[static_cast<size_t>(v)] != 1)
      throw RoundingInfeasible(
          "nearest-atom rounding of the map breaks a marginal; refine n");
  return plan;
}

CompareReport compare(const RadialMeasure& rho, int n,
                      const std::vector<std::string>& patterns, const CostFn& cost,
                      const LpOptions& opts) {
  const AtomGrid grid = discretize(rho, n);
  const CostTensor tensor(grid, cost);
  const LpResult lp = solve_mmot(tensor, opts);

  CompareReport rep;
  rep.n = n;
  rep.lp_value = lp.value;
  rep.lp_iterations = lp.iterations;
  rep.lp_min_reduced_cost = lp.min_reduced_cost;
  rep.lp_plan = lp.plan;

  for (const auto& pat : patterns) {
    const MonotoneMap map(rho, pat);
    const DiscretePlan plan = plan_from_map(map, grid);
    CompareRow row;
    row.pattern = pat;
    row.plan_value = plan_cost(plan, tensor);
    row.gap = row.plan_value - lp.value;

    std::set<std::array<int, 3>> graph;
    for (const auto& e : plan.entries) {
      std::array<int, 3> t{e.i, e.j, e.k};
      std::sort(t.begin(), t.end());
      graph.insert(t);
    }
    row.support_on_graph = true;
    for (const auto& e : lp.plan.entries) {
      std::array<int, 3> t{e.i, e.j, e.k};
      std::sort(t.begin(), t.end());
      if (!graph.count(t)) {
        row.support_on_graph = false;
        break;
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace mmot
