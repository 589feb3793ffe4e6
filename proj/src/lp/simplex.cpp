// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

// Dense bounded-variable revised primal simplex.
//
// Singleton inequality rows become variable bounds. Remaining rows are grouped
// by direction (a row and its negation share one group) and each group gets a
// bounded row variable r with Nx - r = 0. The working problem is therefore
//
//   min cᵀx  s.t.  [G 0; N -I] [x; r] = [h; 0],  lo <= (x, r) <= up
//
// solved by a two-phase method with one artificial per row.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/core.h>

#include "gridshift/error.hpp"
#include "gridshift/lp.hpp"

namespace gridshift {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void LinearProgram::check() const {
  const Index n = c.size();
  if (G.rows() > 0 && G.cols() != n) throw InputError("equality block has wrong column count");
  if (K.rows() > 0 && K.cols() != n) throw InputError("inequality block has wrong column count");
  if (h.size() != G.rows()) throw InputError("equality right-hand side has wrong length");
  if (f.size() != K.rows()) throw InputError("inequality right-hand side has wrong length");
  if (G.rows() > n) throw InputError("more equality rows than variables");
  if (!c.allFinite() || !G.allFinite() || !h.allFinite() || !K.allFinite() || !f.allFinite()) {
    throw InputError("linear program contains non-finite data");
  }
}

double LpSolution::dual_objective(const LinearProgram& lp) const {
  return lp.h.dot(duals_eq) + lp.f.dot(duals_ineq);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorEvery = 64;
constexpr int kDegenerateLimit = 50;

struct BoundSource {
  Index row = -1;
  double scale = 0.0;  // coefficient a with K_row = a * (normalized row)
};

struct Presolved {
  Index n = 0;
  Index E = 0;
  Index R = 0;
  MatrixXd A;
  VectorXd b;
  VectorXd lo, up;
  std::vector<BoundSource> lo_src, up_src;
};

Presolved presolve(const LinearProgram& lp) {
  Presolved p;
  p.n = lp.variables();
  p.E = lp.eq_rows();
  const Index n = p.n;

  std::vector<double> lo(static_cast<std::size_t>(n), -kInf), up(static_cast<std::size_t>(n), kInf);
  p.lo_src.assign(static_cast<std::size_t>(n), {});
  p.up_src.assign(static_cast<std::size_t>(n), {});

  std::map<std::vector<double>, std::size_t> group_of;
  std::vector<std::vector<double>> groups;

  auto tighten = [](std::vector<double>& l, std::vector<double>& u, std::vector<BoundSource>& ls,
                    std::vector<BoundSource>& us, std::size_t j, double a, double f, Index row) {
    const double bound = f / a;
    if (a > 0.0) {
      if (bound < u[j]) {
        u[j] = bound;
        us[j] = {row, a};
      }
    } else if (bound > l[j]) {
      l[j] = bound;
      ls[j] = {row, a};
    }
  };

  std::vector<double> glo, gup;
  std::vector<BoundSource> glo_src, gup_src;

  for (Index k = 0; k < lp.ineq_rows(); ++k) {
    Index first = -1;
    Index nnz = 0;
    for (Index j = 0; j < n; ++j) {
      if (lp.K(k, j) != 0.0) {
        if (first < 0) first = j;
        ++nnz;
      }
    }
    if (nnz == 0) {
      if (lp.f(k) < -tolerance::feasibility) {
        throw SolverError(SolverStatus::infeasible, fmt::format("inequality row {} reads 0 <= {}", k, lp.f(k)));
      }
      continue;
    }
    const double a1 = lp.K(k, first);
    if (nnz == 1) {
      tighten(lo, up, p.lo_src, p.up_src, static_cast<std::size_t>(first), a1, lp.f(k), k);
      continue;
    }
    std::vector<double> key(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) key[static_cast<std::size_t>(j)] = lp.K(k, j) / a1;
    auto [it, inserted] = group_of.emplace(std::move(key), groups.size());
    if (inserted) {
      groups.push_back(it->first);
      glo.push_back(-kInf);
      gup.push_back(kInf);
      glo_src.emplace_back();
      gup_src.emplace_back();
    }
    tighten(glo, gup, glo_src, gup_src, it->second, a1, lp.f(k), k);
  }

  p.R = static_cast<Index>(groups.size());
  const Index m = p.E + p.R;
  const Index nv = n + p.R;
  p.A = MatrixXd::Zero(m, nv);
  p.b = VectorXd::Zero(m);
  if (p.E > 0) {
    p.A.topLeftCorner(p.E, n) = lp.G;
    p.b.head(p.E) = lp.h;
  }
  for (Index g = 0; g < p.R; ++g) {
    const auto& row = groups[static_cast<std::size_t>(g)];
    for (Index j = 0; j < n; ++j) p.A(p.E + g, j) = row[static_cast<std::size_t>(j)];
    p.A(p.E + g, n + g) = -1.0;
  }
  p.lo.resize(nv);
  p.up.resize(nv);
  for (Index j = 0; j < n; ++j) {
    p.lo(j) = lo[static_cast<std::size_t>(j)];
    p.up(j) = up[static_cast<std::size_t>(j)];
  }
  for (Index g = 0; g < p.R; ++g) {
    p.lo(n + g) = glo[static_cast<std::size_t>(g)];
    p.up(n + g) = gup[static_cast<std::size_t>(g)];
  }
  p.lo_src.insert(p.lo_src.end(), glo_src.begin(), glo_src.end());
  p.up_src.insert(p.up_src.end(), gup_src.begin(), gup_src.end());

  for (Index j = 0; j < nv; ++j) {
    if (p.lo(j) > p.up(j) + tolerance::feasibility * (1.0 + std::abs(p.up(j)))) {
      throw SolverError(SolverStatus::infeasible, "inequality rows imply contradictory bounds");
    }
    if (p.lo(j) > p.up(j)) p.lo(j) = p.up(j);
  }
  return p;
}

enum class Status { basic, at_lower, at_upper, free_zero };

class Simplex {
 public:
  explicit Simplex(const Presolved& p) : p_(p) {
    m_ = p.E + p.R;
    nv_ = p.n + p.R;
    total_ = nv_ + m_;
    lo_.resize(total_);
    up_.resize(total_);
    lo_.head(nv_) = p.lo;
    up_.head(nv_) = p.up;
    x_ = VectorXd::Zero(total_);
    cost_ = VectorXd::Zero(total_);
    status_.assign(static_cast<std::size_t>(total_), Status::at_lower);
    pos_.assign(static_cast<std::size_t>(total_), -1);
    basic_.assign(static_cast<std::size_t>(m_), -1);
    art_sign_ = VectorXd::Ones(m_);
    iteration_cap_ = 20000 + 100 * static_cast<int>(total_ + m_);
    crash();
  }

  void phase1() {
    cost_.setZero();
    for (Index i = 0; i < m_; ++i) {
      if (pos_[static_cast<std::size_t>(nv_ + i)] >= 0) cost_(nv_ + i) = 1.0;
    }
    iterate();
    double infeas = 0.0;
    for (Index i = 0; i < m_; ++i) infeas += x_(nv_ + i);
    double scale = 1.0;
    if (m_ > 0) scale += p_.b.cwiseAbs().maxCoeff();
    if (infeas > tolerance::feasibility * scale * std::max<double>(1.0, std::sqrt(static_cast<double>(m_)))) {
      throw SolverError(SolverStatus::infeasible, fmt::format("linear program is infeasible (residual {:.3g})", infeas));
    }
    for (Index i = 0; i < m_; ++i) {
      lo_(nv_ + i) = 0.0;
      up_(nv_ + i) = 0.0;
    }
    drive_out_artificials();
  }

  void phase2(const VectorXd& c) {
    cost_.setZero();
    cost_.head(p_.n) = c;
    iterate();
    pivot_in_free_variables();
    refactor();
  }

  LpSolution extract(const LinearProgram& lp) const {
    const Index n = p_.n;
    LpSolution sol;
    sol.iterations = iterations_;
    sol.x = x_.head(n);
    sol.objective = lp.c.dot(sol.x);

    const VectorXd y = duals();
    sol.duals_eq = y.head(p_.E);
    const VectorXd d = cost_.head(nv_) - p_.A.transpose() * y;

    sol.duals_ineq = VectorXd::Zero(lp.ineq_rows());
    for (Index j = 0; j < nv_; ++j) {
      const auto st = status_[static_cast<std::size_t>(j)];
      if (st == Status::basic || st == Status::free_zero) continue;
      const BoundSource& src = active_source(j, d(j));
      if (src.row < 0) continue;
      sol.duals_ineq(src.row) = std::min(0.0, d(j) / src.scale);
      sol.basis_rows.push_back(src.row);
    }
    std::sort(sol.basis_rows.begin(), sol.basis_rows.end());

    if (lp.ineq_rows() > 0) {
      const VectorXd slack = lp.f - lp.K * sol.x;
      for (Index k = 0; k < lp.ineq_rows(); ++k) {
        const double tol = tolerance::binding * std::max(1.0, std::abs(lp.f(k)));
        if (slack(k) < -1e3 * tol) {
          throw SolverError(SolverStatus::numerical, fmt::format("inequality row {} violated by {:.3g}", k, -slack(k)));
        }
        if (slack(k) <= tol) sol.binding_ineq.push_back(k);
      }
    }
    if (lp.eq_rows() > 0) {
      const double resid = (lp.G * sol.x - lp.h).cwiseAbs().maxCoeff();
      if (resid > 1e-6 * (1.0 + lp.h.cwiseAbs().maxCoeff())) {
        throw SolverError(SolverStatus::numerical, fmt::format("equality residual {:.3g} after solve", resid));
      }
    }
    return sol;
  }

 private:
  const BoundSource& active_source(Index j, double d) const {
    const auto st = status_[static_cast<std::size_t>(j)];
    const auto& ls = p_.lo_src[static_cast<std::size_t>(j)];
    const auto& us = p_.up_src[static_cast<std::size_t>(j)];
    if (lo_(j) == up_(j)) {
      // Fixed variable: the dual sign tells which row is doing the work.
      if (d < 0.0) return us.row >= 0 ? us : ls;
      if (d > 0.0) return ls.row >= 0 ? ls : us;
      return us.row >= 0 ? us : ls;
    }
    return st == Status::at_upper ? us : ls;
  }

  double column_dot(Index j, const VectorXd& y) const {
    if (j < nv_) return p_.A.col(j).dot(y);
    return art_sign_(j - nv_) * y(j - nv_);
  }

  VectorXd ftran(Index j) const {
    if (j < nv_) return binv_ * p_.A.col(j);
    return binv_.col(j - nv_) * art_sign_(j - nv_);
  }

  VectorXd duals() const {
    VectorXd cb(m_);
    for (Index i = 0; i < m_; ++i) cb(i) = cost_(basic_[static_cast<std::size_t>(i)]);
    return binv_.transpose() * cb;
  }

  void set_nonbasic(Index j, Status st) {
    status_[static_cast<std::size_t>(j)] = st;
    if (st == Status::at_lower) x_(j) = lo_(j);
    if (st == Status::at_upper) x_(j) = up_(j);
    if (st == Status::free_zero) x_(j) = 0.0;
  }

  static Status resting_status(double lo, double up) {
    if (std::isfinite(lo)) return Status::at_lower;
    if (std::isfinite(up)) return Status::at_upper;
    return Status::free_zero;
  }

  void crash() {
    for (Index j = 0; j < nv_; ++j) set_nonbasic(j, resting_status(lo_(j), up_(j)));
    VectorXd res = p_.b - p_.A * x_.head(nv_);
    binv_ = MatrixXd::Zero(m_, m_);
    for (Index i = 0; i < m_; ++i) {
      const Index art = nv_ + i;
      if (i >= p_.E) {
        // Row variable r carries coefficient -1 in its own row.
        const Index r = p_.n + (i - p_.E);
        const double value = x_(r) - res(i);
        const double tol = tolerance::feasibility;
        if (value >= lo_(r) - tol && value <= up_(r) + tol) {
          make_basic(r, i, std::clamp(value, lo_(r), up_(r)));
          binv_(i, i) = -1.0;
          lo_(art) = up_(art) = 0.0;
          set_nonbasic(art, Status::at_lower);
          continue;
        }
      }
      art_sign_(i) = res(i) >= 0.0 ? 1.0 : -1.0;
      lo_(art) = 0.0;
      up_(art) = kInf;
      make_basic(art, i, std::abs(res(i)));
      binv_(i, i) = art_sign_(i);
    }
    since_refactor_ = kRefactorEvery;  // force a clean factorization first
  }

  void make_basic(Index j, Index p, double value) {
    status_[static_cast<std::size_t>(j)] = Status::basic;
    pos_[static_cast<std::size_t>(j)] = p;
    basic_[static_cast<std::size_t>(p)] = j;
    x_(j) = value;
  }

  void refactor() {
    if (m_ == 0) {
      since_refactor_ = 0;
      return;
    }
    MatrixXd B(m_, m_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = basic_[static_cast<std::size_t>(i)];
      if (j < nv_) {
        B.col(i) = p_.A.col(j);
      } else {
        B.col(i).setZero();
        B(j - nv_, i) = art_sign_(j - nv_);
      }
    }
    Eigen::PartialPivLU<MatrixXd> lu(B);
    if (!(lu.rcond() > tolerance::min_rcond)) {
      throw SolverError(SolverStatus::numerical, "simplex basis became singular");
    }
    binv_ = lu.inverse();
    VectorXd rhs = p_.b;
    for (Index j = 0; j < total_; ++j) {
      if (status_[static_cast<std::size_t>(j)] == Status::basic || x_(j) == 0.0) continue;
      if (j < nv_) {
        rhs -= p_.A.col(j) * x_(j);
      } else {
        rhs(j - nv_) -= art_sign_(j - nv_) * x_(j);
      }
    }
    const VectorXd xb = binv_ * rhs;
    for (Index i = 0; i < m_; ++i) x_(basic_[static_cast<std::size_t>(i)]) = xb(i);
    since_refactor_ = 0;
  }

  struct Entering {
    Index q = -1;
    double dir = 0.0;
    double d = 0.0;
  };

  Entering price(const VectorXd& y) const {
    Entering best;
    double best_score = 0.0;
    for (Index j = 0; j < total_; ++j) {
      const auto st = status_[static_cast<std::size_t>(j)];
      if (st == Status::basic || lo_(j) == up_(j)) continue;
      const double d = cost_(j) - column_dot(j, y);
      double dir = 0.0;
      if (st == Status::free_zero) {
        if (std::abs(d) > tolerance::optimality) dir = d < 0.0 ? 1.0 : -1.0;
      } else if (st == Status::at_lower) {
        if (d < -tolerance::optimality) dir = 1.0;
      } else if (d > tolerance::optimality) {
        dir = -1.0;
      }
      if (dir == 0.0) continue;
      if (bland_) return {j, dir, d};
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = {j, dir, d};
      }
    }
    return best;
  }

  struct Step {
    Index p = -1;          // leaving position, -1 for a bound flip
    double t = 0.0;
    bool to_upper = false;  // bound the leaving variable lands on
  };

  // Returns false when nothing limits the step.
  bool ratio_test(const VectorXd& alpha, Index q, double dir, bool harris, Step& step) const {
    const double range = up_(q) - lo_(q);
    auto limit = [&](Index i, double relax, double& ratio, bool& upper) {
      const Index j = basic_[static_cast<std::size_t>(i)];
      const double delta = -dir * alpha(i);
      if (delta < -tolerance::pivot && std::isfinite(lo_(j))) {
        ratio = (x_(j) - lo_(j) + relax) / -delta;
        upper = false;
        return true;
      }
      if (delta > tolerance::pivot && std::isfinite(up_(j))) {
        ratio = (up_(j) - x_(j) + relax) / delta;
        upper = true;
        return true;
      }
      return false;
    };

    double tmax = kInf;
    if (harris) {
      for (Index i = 0; i < m_; ++i) {
        double r;
        bool u;
        if (limit(i, tolerance::harris, r, u)) tmax = std::min(tmax, r);
      }
    }

    Index best = -1;
    double best_ratio = kInf;
    double best_alpha = 0.0;
    bool best_upper = false;
    for (Index i = 0; i < m_; ++i) {
      double r;
      bool u;
      if (!limit(i, 0.0, r, u)) continue;
      r = std::max(r, 0.0);
      bool take = false;
      if (harris) {
        take = r <= tmax && std::abs(alpha(i)) > best_alpha;
      } else if (best < 0 || r < best_ratio - 1e-12) {
        take = true;
      } else if (r <= best_ratio + 1e-12 &&
                 basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(best)]) {
        take = true;
      }
      if (take) {
        best = i;
        best_ratio = r;
        best_alpha = std::abs(alpha(i));
        best_upper = u;
      }
    }

    if (std::isfinite(range) && (best < 0 || range <= best_ratio)) {
      step = {-1, range, false};
      return true;
    }
    if (best < 0) return false;
    step = {best, best_ratio, best_upper};
    return true;
  }

  void apply(Index q, double dir, const VectorXd& alpha, const Step& step) {
    for (Index i = 0; i < m_; ++i) x_(basic_[static_cast<std::size_t>(i)]) -= dir * step.t * alpha(i);
    if (step.p < 0) {
      set_nonbasic(q, dir > 0.0 ? Status::at_upper : Status::at_lower);
      return;
    }
    const double xq = x_(q) + dir * step.t;
    const Index leaving = basic_[static_cast<std::size_t>(step.p)];
    pos_[static_cast<std::size_t>(leaving)] = -1;
    if (leaving >= nv_) up_(leaving) = 0.0;  // artificials never return
    set_nonbasic(leaving, step.to_upper && leaving < nv_ ? Status::at_upper : Status::at_lower);

    const double ap = alpha(step.p);
    const Eigen::RowVectorXd rp = binv_.row(step.p) / ap;
    binv_.noalias() -= alpha * rp;
    binv_.row(step.p) = rp;

    make_basic(q, step.p, xq);
    ++since_refactor_;
  }

  void iterate() {
    int degenerate = 0;
    bool fresh = false;
    for (;;) {
      if (since_refactor_ >= kRefactorEvery) {
        refactor();
        fresh = true;
      }
      const VectorXd y = duals();
      const Entering e = price(y);
      if (e.q < 0) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return;
      }
      fresh = false;
      if (++iterations_ > iteration_cap_) {
        throw SolverError(SolverStatus::numerical, "simplex iteration limit reached");
      }
      const VectorXd alpha = ftran(e.q);
      Step step;
      if (!ratio_test(alpha, e.q, e.dir, !bland_, step)) {
        throw SolverError(SolverStatus::unbounded, "linear program is unbounded");
      }
      apply(e.q, e.dir, alpha, step);

      if (std::abs(e.d) * step.t <= 1e-12) {
        if (++degenerate >= kDegenerateLimit) bland_ = true;
      } else {
        degenerate = 0;
        bland_ = false;
      }
    }
  }

  void drive_out_artificials() {
    refactor();
    for (Index p = 0; p < m_; ++p) {
      const Index a = basic_[static_cast<std::size_t>(p)];
      if (a < nv_) continue;
      const Eigen::RowVectorXd row = binv_.row(p);
      Index best = -1;
      double best_abs = 1e-7;
      for (Index j = 0; j < nv_; ++j) {
        if (status_[static_cast<std::size_t>(j)] == Status::basic) continue;
        const double v = std::abs(row.dot(p_.A.col(j)));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; the artificial stays basic at zero
      const VectorXd alpha = ftran(best);
      x_(a) = 0.0;
      apply(best, 1.0, alpha, Step{p, 0.0, false});
    }
    refactor();
  }

  void pivot_in_free_variables() {
    for (Index j = 0; j < nv_; ++j) {
      if (status_[static_cast<std::size_t>(j)] != Status::free_zero) continue;
      const VectorXd alpha = ftran(j);
      for (double dir : {1.0, -1.0}) {
        Step step;
        if (ratio_test(alpha, j, dir, false, step) && step.p >= 0) {
          apply(j, dir, alpha, step);
          break;
        }
      }
      if (since_refactor_ >= kRefactorEvery) refactor();
    }
  }

  const Presolved& p_;
  Index m_ = 0, nv_ = 0, total_ = 0;
  VectorXd lo_, up_, x_, cost_, art_sign_;
  std::vector<Status> status_;
  std::vector<Index> pos_, basic_;
  MatrixXd binv_;
  int iterations_ = 0;
  int iteration_cap_ = 0;
  int since_refactor_ = 0;
  bool bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  lp.check();
  const Presolved p = presolve(lp);
  Simplex s(p);
  s.phase1();
  s.phase2(lp.c);
  return s.extract(lp);
}

}  // namespace gridshift
