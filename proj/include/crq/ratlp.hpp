#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "crq/rational.hpp"

namespace crq {

struct LinRow {
  std::vector<Rational> a;
  Rational b;
};

// Equality and <= rows over nvars variables; per-variable nonnegativity.
struct LinearSystem {
  int nvars = 0;
  std::vector<LinRow> eq;
  std::vector<LinRow> le;
  std::vector<bool> nonneg;  // size nvars

  void check_shape() const {
    if (static_cast<int>(nonneg.size()) != nvars)
      throw std::invalid_argument("nonneg flags must match variable count");
    for (const auto& r : eq)
      if (static_cast<int>(r.a.size()) != nvars) throw std::invalid_argument("bad eq row width");
    for (const auto& r : le)
      if (static_cast<int>(r.a.size()) != nvars) throw std::invalid_argument("bad le row width");
  }
};

enum class LpStatus { Feasible, Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> point;      // Feasible / Optimal
  Rational objective;               // Optimal
  std::vector<Rational> farkas;     // Infeasible: multipliers, eq rows then le rows
  std::vector<Rational> ray;        // Unbounded: improving direction
};

inline bool verify_point(const LinearSystem& sys, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != sys.nvars) return false;
  for (int j = 0; j < sys.nvars; ++j)
    if (sys.nonneg[j] && x[j] < 0) return false;
  for (const auto& r : sys.eq) {
    Rational s = 0;
    for (int j = 0; j < sys.nvars; ++j) s += r.a[j] * x[j];
    if (s != r.b) return false;
  }
  for (const auto& r : sys.le) {
    Rational s = 0;
    for (int j = 0; j < sys.nvars; ++j) s += r.a[j] * x[j];
    if (s > r.b) return false;
  }
  return true;
}

// A certificate w (free on eq rows, <= 0 on le rows) proves infeasibility when
// the aggregated row sum(w_i * a_i) has nonpositive coefficients on
// nonnegative variables, zero on free variables, and positive rhs.
inline bool verify_farkas(const LinearSystem& sys, const std::vector<Rational>& w) {
  const size_t m = sys.eq.size() + sys.le.size();
  if (w.size() != m) return false;
  for (size_t i = 0; i < sys.le.size(); ++i)
    if (w[sys.eq.size() + i] > 0) return false;
  std::vector<Rational> u(sys.nvars, Rational(0));
  Rational ub = 0;
  size_t k = 0;
  for (const auto& r : sys.eq) {
    for (int j = 0; j < sys.nvars; ++j) u[j] += w[k] * r.a[j];
    ub += w[k] * r.b;
    ++k;
  }
  for (const auto& r : sys.le) {
    for (int j = 0; j < sys.nvars; ++j) u[j] += w[k] * r.a[j];
    ub += w[k] * r.b;
    ++k;
  }
  for (int j = 0; j < sys.nvars; ++j) {
    if (sys.nonneg[j]) {
      if (u[j] > 0) return false;
    } else {
      if (u[j] != 0) return false;
    }
  }
  return ub > 0;
}

namespace detail {

// Dense two-phase simplex over exact rationals with Bland's anti-cycling
// pivot rule. Desk-scale sizes; no tolerance knobs anywhere.
class Simplex {
 public:
  explicit Simplex(const LinearSystem& sys) : sys_(sys) {
    sys.check_shape();
    // Structural columns: one per nonnegative variable, a split pair for
    // free variables, then one slack per <= row.
    for (int j = 0; j < sys.nvars; ++j) {
      col_var_.push_back({j, 1});
      if (!sys.nonneg[j]) col_var_.push_back({j, -1});
    }
    nslack_ = static_cast<int>(sys.le.size());
    nstruct_ = static_cast<int>(col_var_.size()) + nslack_;
    m_ = static_cast<int>(sys.eq.size() + sys.le.size());
    rows_.assign(m_, std::vector<Rational>(nstruct_ + m_, Rational(0)));
    rhs_.assign(m_, Rational(0));
    flip_.assign(m_, 1);

    int slack0 = static_cast<int>(col_var_.size());
    for (int i = 0; i < m_; ++i) {
      const bool is_eq = i < static_cast<int>(sys.eq.size());
      const LinRow& src = is_eq ? sys.eq[i] : sys.le[i - sys.eq.size()];
      for (size_t c = 0; c < col_var_.size(); ++c)
        rows_[i][c] = src.a[col_var_[c].first] * col_var_[c].second;
      if (!is_eq) rows_[i][slack0 + (i - sys.eq.size())] = 1;
      rhs_[i] = src.b;
      if (rhs_[i] < 0) {
        flip_[i] = -1;
        rhs_[i] = -rhs_[i];
        for (int c = 0; c < nstruct_; ++c) rows_[i][c] = -rows_[i][c];
      }
      rows_[i][nstruct_ + i] = 1;  // artificial
      basis_.push_back(nstruct_ + i);
    }
  }

  // Phase 1. Returns nullopt when feasible; otherwise the Farkas multipliers
  // mapped back onto the original rows.
  std::optional<std::vector<Rational>> phase1() {
    std::vector<Rational> cost(nstruct_ + m_, Rational(0));
    for (int i = 0; i < m_; ++i) cost[nstruct_ + i] = 1;
    set_costs(cost);
    run(nstruct_ + m_);
    if (obj_val_ != 0) {
      // Simplex multipliers y_i = 1 - reduced cost of artificial i.
      std::vector<Rational> w(m_);
      for (int i = 0; i < m_; ++i) w[i] = (Rational(1) - obj_[nstruct_ + i]) * flip_[i];
      return w;
    }
    // Pivot zero-valued artificials out of the basis where possible; rows
    // that cannot be pivoted are redundant and stay inert.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < nstruct_) continue;
      for (int c = 0; c < nstruct_; ++c) {
        if (rows_[r][c] != 0) {
          pivot(r, c);
          break;
        }
      }
    }
    return std::nullopt;
  }

  // Phase 2 on structural costs (minimization). Requires phase1() feasible.
  LpStatus phase2(const std::vector<Rational>& struct_cost) {
    set_costs(struct_cost);
    return run(nstruct_);
  }

  Rational objective() const { return obj_val_; }

  std::vector<Rational> extract_point() const {
    std::vector<Rational> x(sys_.nvars, Rational(0));
    for (int r = 0; r < m_; ++r) {
      int c = basis_[r];
      if (c < static_cast<int>(col_var_.size()))
        x[col_var_[c].first] += rhs_[r] * col_var_[c].second;
    }
    return x;
  }

  std::vector<Rational> extract_ray() const {
    std::vector<Rational> d(sys_.nvars, Rational(0));
    if (ray_col_ < static_cast<int>(col_var_.size()))
      d[col_var_[ray_col_].first] += col_var_[ray_col_].second;
    for (int r = 0; r < m_; ++r) {
      int c = basis_[r];
      if (c < static_cast<int>(col_var_.size()))
        d[col_var_[c].first] += -rows_[r][ray_col_] * col_var_[c].second;
    }
    return d;
  }

  // Structural cost vector for the original objective (padded with slacks).
  std::vector<Rational> structural_costs(const std::vector<Rational>& obj, bool maximize) const {
    std::vector<Rational> c(nstruct_ + m_, Rational(0));
    for (size_t k = 0; k < col_var_.size(); ++k) {
      Rational v = obj[col_var_[k].first] * col_var_[k].second;
      c[k] = maximize ? Rational(-v) : v;
    }
    return c;
  }

 private:
  const LinearSystem& sys_;
  std::vector<std::pair<int, int>> col_var_;  // (orig var, sign)
  int nslack_ = 0, nstruct_ = 0, m_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<int> flip_;
  std::vector<int> basis_;
  std::vector<Rational> obj_;  // reduced costs
  Rational obj_val_;
  std::vector<Rational> cost_;
  int ray_col_ = -1;

  void set_costs(const std::vector<Rational>& cost) {
    cost_ = cost;
    obj_ = cost;
    obj_val_ = 0;
    for (int r = 0; r < m_; ++r) {
      const Rational& cb = cost_[basis_[r]];
      if (cb == 0) continue;
      for (int c = 0; c < nstruct_ + m_; ++c) obj_[c] -= cb * rows_[r][c];
      obj_val_ += cb * rhs_[r];
    }
  }

  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = lowest basis index among minimum-ratio rows.
  LpStatus run(int allowed_cols) {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < allowed_cols; ++c)
        if (obj_[c] < 0) {
          enter = c;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      Rational best;
      for (int r = 0; r < m_; ++r) {
        if (rows_[r][enter] <= 0) continue;
        Rational ratio = rhs_[r] / rows_[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) {
        ray_col_ = enter;
        return LpStatus::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    Rational p = rows_[r][c];
    for (auto& v : rows_[r]) v /= p;
    rhs_[r] /= p;
    for (int i = 0; i < m_; ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      Rational f = rows_[i][c];
      for (int j = 0; j < nstruct_ + m_; ++j) rows_[i][j] -= f * rows_[r][j];
      rhs_[i] -= f * rhs_[r];
    }
    if (obj_[c] != 0) {
      Rational f = obj_[c];
      for (int j = 0; j < nstruct_ + m_; ++j) obj_[j] -= f * rows_[r][j];
      obj_val_ += f * rhs_[r];
    }
    basis_[r] = c;
  }
};

}  // namespace detail

inline LpResult solve_feasibility(const LinearSystem& sys) {
  detail::Simplex sx(sys);
  LpResult out;
  if (auto w = sx.phase1()) {
    out.status = LpStatus::Infeasible;
    out.farkas = std::move(*w);
    if (!verify_farkas(sys, out.farkas))
      throw std::logic_error("internal error: infeasibility certificate failed verification");
    return out;
  }
  out.status = LpStatus::Feasible;
  out.point = sx.extract_point();
  return out;
}

inline LpResult optimize(const LinearSystem& sys, const std::vector<Rational>& objective,
                         bool maximize) {
  if (static_cast<int>(objective.size()) != sys.nvars)
    throw std::invalid_argument("objective width must match variable count");
  detail::Simplex sx(sys);
  LpResult out;
  if (auto w = sx.phase1()) {
    out.status = LpStatus::Infeasible;
    out.farkas = std::move(*w);
    if (!verify_farkas(sys, out.farkas))
      throw std::logic_error("internal error: infeasibility certificate failed verification");
    return out;
  }
  LpStatus st = sx.phase2(sx.structural_costs(objective, maximize));
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    out.ray = sx.extract_ray();
    return out;
  }
  out.status = LpStatus::Optimal;
  out.point = sx.extract_point();
  Rational v = 0;
  for (int j = 0; j < sys.nvars; ++j) v += objective[j] * out.point[j];
  out.objective = v;
  return out;
}

}  // namespace crq
