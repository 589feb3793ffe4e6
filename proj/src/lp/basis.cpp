// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "gridshift/error.hpp"
#include "gridshift/lp.hpp"

namespace gridshift {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_rows(const std::vector<Index>& rows) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Index r : rows) {
    const auto v = static_cast<std::int64_t>(r);
    h = fnv1a(h, &v, sizeof v);
  }
  return h;
}

}  // namespace

Basis::Basis(MatrixXd A, VectorXd b, std::vector<Index> row_map, Index eq_rows)
    : A_(std::move(A)), b_(std::move(b)), row_map_(std::move(row_map)), eq_rows_(eq_rows) {
  if (A_.rows() != A_.cols() || b_.size() != A_.rows() || static_cast<Index>(row_map_.size()) != A_.rows()) {
    throw SolverError(SolverStatus::numerical, "basis must be square with matching right-hand side");
  }
  if (A_.rows() == 0) {
    rcond_ = 1.0;
  } else {
    lu_.compute(A_);
    rcond_ = lu_.rcond();
  }
  if (!(rcond_ > tolerance::min_rcond)) {
    throw SolverError(SolverStatus::numerical, fmt::format("basis is singular (rcond {:.3g})", rcond_));
  }
  id_ = hash_rows(row_map_);
}

VectorXd Basis::solve(const VectorXd& rhs) const {
  if (rhs.size() != size()) throw InputError("basis right-hand side has wrong length");
  if (size() == 0) return rhs;
  return lu_.solve(rhs);
}

MatrixXd Basis::solve(const MatrixXd& rhs) const {
  if (rhs.rows() != size()) throw InputError("basis right-hand side has wrong row count");
  if (size() == 0) return rhs;
  return lu_.solve(rhs);
}

VectorXd Basis::solve_transpose(const VectorXd& rhs) const {
  if (rhs.size() != size()) throw InputError("basis right-hand side has wrong length");
  if (size() == 0) return rhs;
  return lu_.transpose().solve(rhs);
}

namespace {

std::vector<Index> greedy_rows(const LinearProgram& lp, const std::vector<Index>& candidates, Index needed) {
  // Orthonormal basis of the rows chosen so far, starting with the equality block.
  std::vector<VectorXd> q;
  auto add = [&](VectorXd v) {
    for (const auto& u : q) v -= u.dot(v) * u;
    const double norm = v.norm();
    if (norm > 1e-12) q.push_back(v / norm);
    return norm;
  };
  for (Index i = 0; i < lp.eq_rows(); ++i) {
    const VectorXd row = lp.G.row(i).transpose();
    add(row / std::max(row.norm(), 1e-300));
  }

  std::vector<VectorXd> resid;
  resid.reserve(candidates.size());
  for (Index k : candidates) {
    VectorXd v = lp.K.row(k).transpose();
    v /= std::max(v.norm(), 1e-300);
    for (const auto& u : q) v -= u.dot(v) * u;
    resid.push_back(std::move(v));
  }

  std::vector<Index> chosen;
  std::vector<bool> used(candidates.size(), false);
  while (static_cast<Index>(chosen.size()) < needed) {
    std::size_t best = candidates.size();
    double best_norm = 1e-9;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const double nrm = resid[c].norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best == candidates.size()) {
      throw SolverError(SolverStatus::numerical,
                        fmt::format("no nonsingular basis among {} binding rows (have {} of {})", candidates.size(),
                                    chosen.size(), needed));
    }
    used[best] = true;
    chosen.push_back(candidates[best]);
    const VectorXd u = resid[best] / best_norm;
    q.push_back(u);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!used[c]) resid[c] -= u.dot(resid[c]) * u;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Basis assemble(const LinearProgram& lp, const std::vector<Index>& rows) {
  const Index n = lp.variables();
  const Index E = lp.eq_rows();
  MatrixXd A(n, n);
  VectorXd b(n);
  std::vector<Index> map;
  map.reserve(static_cast<std::size_t>(n));
  if (E > 0) {
    A.topRows(E) = lp.G;
    b.head(E) = lp.h;
  }
  for (Index i = 0; i < E; ++i) map.push_back(i);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index i = E + static_cast<Index>(r);
    A.row(i) = lp.K.row(rows[r]);
    b(i) = lp.f(rows[r]);
    map.push_back(rows[r]);
  }
  return Basis(std::move(A), std::move(b), std::move(map), E);
}

}  // namespace

Basis extract_optimal_basis(const LinearProgram& lp, const LpSolution& sol) {
  const Index needed = lp.variables() - lp.eq_rows();
  if (static_cast<Index>(sol.basis_rows.size()) == needed) {
    try {
      return assemble(lp, sol.basis_rows);
    } catch (const SolverError&) {
      // fall through to the greedy selection
    }
  }
  return assemble(lp, greedy_rows(lp, sol.binding_ineq, needed));
}

VectorXd solve_basis_system(const Basis& basis, const VectorXd& delta_b) {
  const VectorXd dx = basis.solve(delta_b);
  if (!dx.allFinite()) throw SolverError(SolverStatus::numerical, "basis solve produced non-finite values");
  return dx;
}

}  // namespace gridshift
