// Copyright 2026 The gridshift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gridshift {

/// Every numerical threshold used by the LP layer.
namespace tolerance {
inline constexpr double feasibility = 1e-7;  // absolute, on constraint residuals
inline constexpr double optimality = 1e-8;   // on reduced costs
inline constexpr double pivot = 1e-9;        // smallest usable pivot element
inline constexpr double harris = 1e-9;       // ratio-test relaxation
inline constexpr double binding = 1e-7;      // slack below which an inequality is tight
inline constexpr double min_rcond = 1e-13;   // basis conditioning floor
}  // namespace tolerance

/// min cᵀx  s.t.  Gx = h,  Kx <= f.  Variables are free unless bounded by rows of K.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  Eigen::MatrixXd K;
  Eigen::VectorXd f;

  Eigen::Index variables() const { return c.size(); }
  Eigen::Index eq_rows() const { return G.rows(); }
  Eigen::Index ineq_rows() const { return K.rows(); }

  /// Throws InputError on inconsistent dimensions.
  void check() const;
};

/// Duals follow c = Gᵀ·duals_eq + Kᵀ·duals_ineq with duals_ineq <= 0, so the
/// dual objective is hᵀ·duals_eq + fᵀ·duals_ineq.
struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd duals_eq;
  Eigen::VectorXd duals_ineq;
  std::vector<Eigen::Index> binding_ineq;  // ascending
  std::vector<Eigen::Index> basis_rows;    // inequality rows defining the final vertex, ascending
  int iterations = 0;

  double dual_objective(const LinearProgram& lp) const;
};

/// Bounded-variable revised primal simplex. Throws SolverError when the LP is
/// infeasible, unbounded, or the factorization breaks down.
LpSolution solve_lp(const LinearProgram& lp);

/// Square optimal basis: the equality rows followed by n - eq_rows binding
/// inequality rows.
class Basis {
 public:
  Basis(Eigen::MatrixXd A, Eigen::VectorXd b, std::vector<Eigen::Index> row_map, Eigen::Index eq_rows);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  /// Row r < eq_rows() is equality row r; later rows map to inequality indices.
  const std::vector<Eigen::Index>& row_map() const { return row_map_; }
  Eigen::Index size() const { return A_.rows(); }
  Eigen::Index eq_rows() const { return eq_rows_; }
  double rcond() const { return rcond_; }
  /// Content hash of the selected rows, used to tag derived signals.
  std::uint64_t id() const { return id_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  std::vector<Eigen::Index> row_map_;
  Eigen::Index eq_rows_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_;
  std::uint64_t id_;
};

/// Uses the solver's vertex rows when they form a nonsingular basis, otherwise
/// selects greedily among the binding rows by largest residual norm.
Basis extract_optimal_basis(const LinearProgram& lp, const LpSolution& sol);

Eigen::VectorXd solve_basis_system(const Basis& basis, const Eigen::VectorXd& delta_b);

}  // namespace gridshift
