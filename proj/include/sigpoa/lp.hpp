#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sigpoa/scalar.hpp"

namespace sigpoa {

enum class ConstraintSense { LessEq, Equal, GreaterEq };
enum class LpObjective { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded, NumericFailure };

/// max/min c'x subject to row-wise <=,=,>= constraints and x >= 0.
template <class Scalar>
struct LinearProgram {
  LpObjective sense = LpObjective::Maximize;
  VecX<Scalar> objective;
  MatX<Scalar> constraints;
  std::vector<ConstraintSense> row_sense;
  VecX<Scalar> rhs;

  int rows() const { return static_cast<int>(constraints.rows()); }
  int cols() const { return static_cast<int>(constraints.cols()); }
};

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::NumericFailure;
  Scalar value = 0;
  VecX<Scalar> point;
  std::string diagnostic;
};

template <class Scalar>
void validate(const LinearProgram<Scalar>& lp) {
  if (lp.objective.size() != lp.cols())
    throw std::invalid_argument("lp: objective length does not match column count");
  if (lp.rhs.size() != lp.rows())
    throw std::invalid_argument("lp: rhs length does not match row count");
  if (static_cast<int>(lp.row_sense.size()) != lp.rows())
    throw std::invalid_argument("lp: row sense count does not match row count");
}

namespace detail {

// Dense two-phase tableau simplex. Bland's rule throughout: entering variable
// is the lowest-index improving column, leaving row breaks min-ratio ties by
// lowest basis index. One instantiation serves double (tolerances) and
// Rational (all comparisons exact).
template <class Scalar>
class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram<Scalar>& lp)
      : m_(lp.rows()), n_(lp.cols()), pivot_floor_(Tol<Scalar>::pivot()) {
    // Orient every row with a non-negative rhs first.
    MatX<Scalar> a = lp.constraints;
    VecX<Scalar> b = lp.rhs;
    std::vector<ConstraintSense> sense = lp.row_sense;
    for (int r = 0; r < m_; ++r) {
      if (b(r) < 0) {
        for (int c = 0; c < n_; ++c) a(r, c) = -a(r, c);
        b(r) = -b(r);
        if (sense[r] == ConstraintSense::LessEq)
          sense[r] = ConstraintSense::GreaterEq;
        else if (sense[r] == ConstraintSense::GreaterEq)
          sense[r] = ConstraintSense::LessEq;
      }
    }
    int slack_count = 0, art_count = 0;
    for (auto s : sense) {
      if (s != ConstraintSense::Equal) ++slack_count;
      if (s != ConstraintSense::LessEq) ++art_count;
    }
    total_ = n_ + slack_count + art_count;
    first_artificial_ = n_ + slack_count;
    tab_ = MatX<Scalar>::Zero(m_, total_ + 1);
    basis_.assign(m_, -1);
    int slack = n_, art = first_artificial_;
    for (int r = 0; r < m_; ++r) {
      for (int c = 0; c < n_; ++c) tab_(r, c) = a(r, c);
      tab_(r, total_) = b(r);
      switch (sense[r]) {
        case ConstraintSense::LessEq:
          tab_(r, slack) = 1;
          basis_[r] = slack++;
          break;
        case ConstraintSense::GreaterEq:
          tab_(r, slack) = -1;
          ++slack;
          tab_(r, art) = 1;
          basis_[r] = art++;
          break;
        case ConstraintSense::Equal:
          tab_(r, art) = 1;
          basis_[r] = art++;
          break;
      }
    }
  }

  LpSolution<Scalar> run(const LinearProgram<Scalar>& lp) {
    LpSolution<Scalar> out;
    // Phase 1: drive the artificial variables to zero.
    if (first_artificial_ < total_) {
      VecX<Scalar> phase1 = VecX<Scalar>::Zero(total_);
      for (int c = first_artificial_; c < total_; ++c) phase1(c) = -1;
      LpStatus st = optimize(phase1, /*allow_artificial=*/true);
      if (st != LpStatus::Optimal) {
        out.status = LpStatus::NumericFailure;
        out.diagnostic = "phase 1 did not terminate cleanly: " + diagnostic_;
        return out;
      }
      Scalar art_sum = 0;
      for (int r = 0; r < m_; ++r)
        if (basis_[r] >= first_artificial_) art_sum += tab_(r, total_);
      if (art_sum > feasibility_slack()) {
        out.status = LpStatus::Infeasible;
        out.diagnostic = "phase 1 optimum leaves artificial mass " + std::to_string(to_double(art_sum));
        return out;
      }
      expel_basic_artificials();
    }
    // Phase 2: the user's objective, artificial columns barred.
    VecX<Scalar> c = VecX<Scalar>::Zero(total_);
    for (int j = 0; j < n_; ++j)
      c(j) = lp.sense == LpObjective::Maximize ? lp.objective(j) : -lp.objective(j);
    LpStatus st = optimize(c, /*allow_artificial=*/false);
    if (st == LpStatus::Unbounded) {
      out.status = LpStatus::Unbounded;
      out.diagnostic = "objective improves without bound";
      return out;
    }
    if (st != LpStatus::Optimal) {
      out.status = LpStatus::NumericFailure;
      out.diagnostic = diagnostic_;
      return out;
    }
    out.point = VecX<Scalar>::Zero(n_);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) out.point(basis_[r]) = tab_(r, total_);
    for (int j = 0; j < n_; ++j)
      if (out.point(j) < 0) out.point(j) = 0;  // numerical dust only; checked below
    // Certify feasibility of the reported point against the original rows.
    Scalar worst = 0;
    for (int r = 0; r < lp.rows(); ++r) {
      Scalar lhs = 0;
      for (int j = 0; j < n_; ++j) lhs += lp.constraints(r, j) * out.point(j);
      Scalar resid = 0;
      switch (lp.row_sense[r]) {
        case ConstraintSense::LessEq: resid = lhs - lp.rhs(r); break;
        case ConstraintSense::GreaterEq: resid = lp.rhs(r) - lhs; break;
        case ConstraintSense::Equal: resid = abs_value<Scalar>(lhs - lp.rhs(r)); break;
      }
      if (resid > worst) worst = resid;
    }
    if (worst > residual_tol()) {
      out.status = LpStatus::NumericFailure;
      out.diagnostic = "residual check failed: max violation " + std::to_string(to_double(worst));
      return out;
    }
    Scalar value = 0;
    for (int j = 0; j < n_; ++j) value += lp.objective(j) * out.point(j);
    out.status = LpStatus::Optimal;
    out.value = value;
    return out;
  }

 private:
  static Scalar feasibility_slack() {
    return is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-9);
  }
  static Scalar residual_tol() {
    return is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-7);
  }

  Scalar reduced_cost(const VecX<Scalar>& c, int j) const {
    Scalar d = c(j);
    for (int r = 0; r < m_; ++r) {
      if (c(basis_[r]) == 0 || tab_(r, j) == 0) continue;
      d -= c(basis_[r]) * tab_(r, j);
    }
    return d;
  }

  void pivot(int row, int col) {
    Scalar inv = Scalar(1) / tab_(row, col);
    for (int c = 0; c <= total_; ++c) tab_(row, c) *= inv;
    tab_(row, col) = 1;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      Scalar f = tab_(r, col);
      if (f == 0) continue;
      for (int c = 0; c <= total_; ++c) tab_(r, c) -= f * tab_(row, c);
      tab_(r, col) = 0;
    }
    basis_[row] = col;
  }

  LpStatus optimize(const VecX<Scalar>& c, bool allow_artificial) {
    const int limit = 200000;
    for (int iter = 0; iter < limit; ++iter) {
      const int last = allow_artificial ? total_ : first_artificial_;
      int enter = -1;
      for (int j = 0; j < last; ++j) {
        if (is_basic(j)) continue;
        if (reduced_cost(c, j) > entering_tol()) {
          enter = j;  // Bland: lowest improving index
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      bool saw_subfloor_pivot = false;
      Scalar best_ratio = 0;
      for (int r = 0; r < m_; ++r) {
        if (tab_(r, enter) <= 0) continue;
        if (tab_(r, enter) <= pivot_floor_) {
          saw_subfloor_pivot = true;
          continue;
        }
        Scalar ratio = tab_(r, total_) / tab_(r, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        if (saw_subfloor_pivot) {
          diagnostic_ = "pivot candidates all below " + std::to_string(to_double(pivot_floor_));
          return LpStatus::NumericFailure;
        }
        return LpStatus::Unbounded;
      }
      pivot(leave, enter);
    }
    diagnostic_ = "iteration limit reached";
    return LpStatus::NumericFailure;
  }

  static Scalar entering_tol() {
    return is_exact_v<Scalar> ? Scalar(0) : Scalar(1e-10);
  }

  bool is_basic(int j) const {
    for (int r = 0; r < m_; ++r)
      if (basis_[r] == j) return true;
    return false;
  }

  // Artificials can linger in the basis at level zero after phase 1 when rows
  // are redundant; swap them for any real column with a usable pivot.
  void expel_basic_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (is_basic(j)) continue;
        if (abs_value<Scalar>(tab_(r, j)) > pivot_floor_) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  int m_, n_, total_ = 0, first_artificial_ = 0;
  Scalar pivot_floor_;
  MatX<Scalar> tab_;
  std::vector<int> basis_;
  std::string diagnostic_;
};

}  // namespace detail

template <class Scalar>
LpSolution<Scalar> solve(const LinearProgram<Scalar>& lp) {
  validate(lp);
  detail::SimplexTableau<Scalar> tableau(lp);
  return tableau.run(lp);
}

}  // namespace sigpoa
