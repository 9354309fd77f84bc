#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "stochopt/error.hpp"

namespace stochopt {

/// minimize c·y  subject to  A y ≥ b,  0 ≤ y ≤ u.
/// `upper` may be left empty (no upper bounds) or hold +inf entries.
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector objective;
  Matrix constraints;
  Vector rhs;
  Vector upper;

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return constraints.rows(); }
  bool has_upper(Eigen::Index j) const {
    return upper.size() != 0 && upper(j) < std::numeric_limits<Scalar>::infinity();
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "Optimal";
    case LPStatus::Infeasible: return "Infeasible";
    case LPStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

template <typename Scalar>
struct LPResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LPStatus status = LPStatus::Infeasible;
  Vector primal;
  Scalar value = 0;
  Vector duals;        // one per row of A, ≥ 0
  Vector upper_duals;  // one per variable, zero where no upper bound applies
  int pivots = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-9;
  int max_pivots = 500000;
  Eigen::Index max_variables = 4096;
  Eigen::Index max_constraints = 512;
};

namespace detail {

/// Dense tableau over [y | surplus | artificial | rhs]. The artificial block
/// starts as the identity, so it always holds the current basis inverse and
/// the duals fall out as c_B^T B^{-1} without a separate solve.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(const Matrix& a, const Vector& b, const SimplexOptions& opts)
      : rows_(a.rows()), structural_(a.cols()), opts_(opts) {
    cols_ = structural_ + 2 * rows_;
    t_ = Matrix::Zero(rows_, cols_ + 1);
    sign_.resize(rows_);
    basis_.resize(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      sign_(i) = b(i) >= Scalar(0) ? Scalar(1) : Scalar(-1);
      t_.row(i).head(structural_) = sign_(i) * a.row(i);
      t_(i, structural_ + i) = -sign_(i);
      t_(i, artificial(i)) = Scalar(1);
      t_(i, cols_) = sign_(i) * b(i);
      basis_[i] = artificial(i);
    }
  }

  Eigen::Index artificial(Eigen::Index i) const { return structural_ + rows_ + i; }
  bool is_artificial(Eigen::Index j) const { return j >= structural_ + rows_; }

  /// Runs Bland's rule on `cost` over the columns [0, allowed). Returns
  /// false on unboundedness.
  bool optimize(const Vector& cost, Eigen::Index allowed, int& pivots) {
    const Scalar tol(opts_.pivot_tolerance);
    for (;;) {
      const Vector reduced = reduced_costs(cost);
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (reduced(j) < -tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;

      Eigen::Index leaving = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const Scalar coef = t_(i, entering);
        if (coef <= tol) continue;
        const Scalar ratio = t_(i, cols_) / coef;
        if (leaving < 0 || ratio < best_ratio - tol * (Scalar(1) + std::abs(best_ratio))) {
          best_ratio = ratio;
          leaving = i;
        } else if (ratio <= best_ratio + tol * (Scalar(1) + std::abs(best_ratio)) && basis_[i] < basis_[leaving]) {
          leaving = i;
        }
      }
      if (leaving < 0) return false;
      if (++pivots > opts_.max_pivots)
        throw Error(ErrorKind::NumericalFailure, "simplex pivot limit reached (" + std::to_string(opts_.max_pivots) + ")");
      pivot(leaving, entering);
    }
  }

  /// Replaces basic artificials by structural or surplus columns where the
  /// row allows it. Rows with no such column are redundant; their artificial
  /// stays basic at level zero and never moves again.
  void drive_out_artificials(int& pivots) {
    const Scalar tol(opts_.pivot_tolerance);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (Eigen::Index j = 0; j < structural_ + rows_; ++j) {
        if (std::abs(t_(i, j)) > tol) {
          ++pivots;
          pivot(i, j);
          break;
        }
      }
    }
  }

  Vector reduced_costs(const Vector& cost) const {
    Vector cb(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
    Vector r = cost;
    r.noalias() -= t_.leftCols(cols_).transpose() * cb;
    return r;
  }

  Scalar objective(const Vector& cost) const {
    Scalar v(0);
    for (Eigen::Index i = 0; i < rows_; ++i) v += cost(basis_[i]) * t_(i, cols_);
    return v;
  }

  Vector basic_values() const {
    Vector x = Vector::Zero(cols_);
    for (Eigen::Index i = 0; i < rows_; ++i) x(basis_[i]) = std::max(Scalar(0), t_(i, cols_));
    return x;
  }

  /// Duals of the original (unsigned) rows for the given cost vector.
  Vector duals(const Vector& cost) const {
    Vector cb(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) cb(i) = cost(basis_[i]);
    const Vector z = t_.middleCols(structural_ + rows_, rows_).transpose() * cb;
    return sign_.cwiseProduct(z);
  }

 private:
  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, c);
      if (f != Scalar(0)) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  Eigen::Index rows_;
  Eigen::Index structural_;
  Eigen::Index cols_;
  SimplexOptions opts_;
  Matrix t_;
  Vector sign_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Two-phase primal simplex with Bland's anti-cycling rule.
///
/// Upper bounds are folded into extra rows -y_j ≥ -u_j; their multipliers are
/// reported separately in `upper_duals`, so strong duality reads
/// c·y = b·duals - u·upper_duals.
template <typename Scalar>
LPResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp, const SimplexOptions& opts = {}) {
  using Vector = typename LinearProgram<Scalar>::Vector;
  using Matrix = typename LinearProgram<Scalar>::Matrix;

  const Eigen::Index n = lp.num_variables();
  const Eigen::Index m = lp.num_constraints();
  if (lp.constraints.cols() != n || lp.rhs.size() != m || (lp.upper.size() != 0 && lp.upper.size() != n))
    throw Error(ErrorKind::InvalidArgument, "linear program dimensions are inconsistent");
  if (!lp.objective.allFinite() || !lp.constraints.allFinite() || !lp.rhs.allFinite())
    throw Error(ErrorKind::InvalidArgument, "linear program has non-finite data");
  if (n > opts.max_variables || m > opts.max_constraints)
    throw Error(ErrorKind::CapExceeded, "linear program has " + std::to_string(n) + " variables and " +
                                            std::to_string(m) + " constraints");

  std::vector<Eigen::Index> bounded;
  for (Eigen::Index j = 0; j < n; ++j)
    if (lp.has_upper(j)) bounded.push_back(j);
  const Eigen::Index rows = m + static_cast<Eigen::Index>(bounded.size());

  Matrix a = Matrix::Zero(rows, n);
  Vector b(rows);
  a.topRows(m) = lp.constraints;
  b.head(m) = lp.rhs;
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const Eigen::Index r = m + static_cast<Eigen::Index>(k);
    a(r, bounded[k]) = Scalar(-1);
    b(r) = -lp.upper(bounded[k]);
  }

  LPResult<Scalar> result;
  detail::Tableau<Scalar> tab(a, b, opts);
  const Eigen::Index cols = n + 2 * rows;

  Vector phase1 = Vector::Zero(cols);
  phase1.tail(rows).setOnes();
  tab.optimize(phase1, cols, result.pivots);
  const Scalar infeasibility = tab.objective(phase1);
  if (infeasibility > Scalar(opts.feasibility_tolerance) * (Scalar(1) + (rows > 0 ? b.cwiseAbs().maxCoeff() : Scalar(0)))) {
    result.status = LPStatus::Infeasible;
    return result;
  }
  tab.drive_out_artificials(result.pivots);

  Vector phase2 = Vector::Zero(cols);
  phase2.head(n) = lp.objective;
  if (!tab.optimize(phase2, n + rows, result.pivots)) {
    result.status = LPStatus::Unbounded;
    return result;
  }

  result.status = LPStatus::Optimal;
  result.primal = tab.basic_values().head(n);
  result.value = lp.objective.dot(result.primal);
  const Vector all_duals = tab.duals(phase2);
  result.duals = all_duals.head(m);
  result.upper_duals = Vector::Zero(n);
  for (std::size_t k = 0; k < bounded.size(); ++k)
    result.upper_duals(bounded[k]) = all_duals(m + static_cast<Eigen::Index>(k));
  return result;
}

using LinearProgramd = LinearProgram<double>;
using LPResultd = LPResult<double>;

}  // namespace stochopt
