#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crq/compound.hpp"
#include "crq/quantity.hpp"
#include "crq/ratlp.hpp"

namespace crq {

struct EmptyDisjunction : std::runtime_error {
  EmptyDisjunction() : std::runtime_error("assessment family is empty") {}
};

struct AssessmentItem {
  std::optional<CompoundExpr> expr;  // absent for raw quantities
  ValueTable table;
  Rational prevision;
  std::string label;
};

inline AssessmentItem raw_item(std::string label, ValueTable table, Rational prevision) {
  return {std::nullopt, std::move(table), std::move(prevision), std::move(label)};
}

// The pair (family, previsions) over one event space. Tables store each
// item's own prevision on its conditioning-false constituents, which is what
// the Q_h construction below relies on.
struct Assessment {
  std::shared_ptr<const EventSpace> space;
  std::vector<AssessmentItem> items;
};

// Builds an assessment whose tables embed the assessed values themselves:
// the context is seeded with every item's own prevision plus any extra
// sub-previsions, and tables are built unchecked so candidate (possibly
// incoherent) assessments are representable.
inline Assessment make_assessment(const std::shared_ptr<const EventSpace>& space,
                                  const std::vector<std::pair<CompoundExpr, Rational>>& family,
                                  AssessmentContext extra = {}) {
  if (family.empty()) throw EmptyDisjunction();
  AssessmentContext ctx = std::move(extra);
  for (const auto& [expr, value] : family)
    if (auto k = expr_key(*space, expr)) ctx.set(*k, value);
  Assessment a{space, {}};
  for (const auto& [expr, value] : family)
    a.items.push_back(
        {expr, build_table(space, expr, ctx, BuildMode::Unchecked), value, expr.str()});
  return a;
}

// The linear system expressing that the prevision vector lies in the convex
// hull of the constituent points Q_h, over the constituents contained in the
// disjunction of the conditioning events.
struct SigmaSystem {
  Mask hn;
  std::vector<int> constituents;              // ids contained in hn
  std::vector<std::vector<Rational>> points;  // Q_h per constituent
  std::vector<Rational> previsions;

  LinearSystem lp() const {
    LinearSystem sys;
    sys.nvars = static_cast<int>(constituents.size());
    sys.nonneg.assign(sys.nvars, true);
    for (size_t i = 0; i < previsions.size(); ++i) {
      LinRow row;
      row.a.resize(sys.nvars);
      for (int h = 0; h < sys.nvars; ++h) row.a[h] = points[h][i];
      row.b = previsions[i];
      sys.eq.push_back(std::move(row));
    }
    LinRow norm;
    norm.a.assign(sys.nvars, Rational(1));
    norm.b = 1;
    sys.eq.push_back(std::move(norm));
    return sys;
  }
};

inline SigmaSystem build_sigma(const Assessment& a, const std::vector<int>& item_indices) {
  if (item_indices.empty()) throw EmptyDisjunction();
  SigmaSystem sigma;
  sigma.hn = Mask(a.space->size());
  for (int i : item_indices) sigma.hn = sigma.hn | a.items[i].table.conditioning();
  for (int id = 0; id < a.space->size(); ++id)
    if (sigma.hn.test(id)) sigma.constituents.push_back(id);
  for (int id : sigma.constituents) {
    std::vector<Rational> q;
    for (int i : item_indices) q.push_back(a.items[i].table.value(id));
    sigma.points.push_back(std::move(q));
  }
  for (int i : item_indices) sigma.previsions.push_back(a.items[i].prevision);
  return sigma;
}

inline SigmaSystem build_sigma(const Assessment& a) {
  std::vector<int> all(a.items.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return build_sigma(a, all);
}

// Indices (relative to the sigma's item list) whose conditioning event gets
// zero mass in every solution: one maximization per item.
inline std::vector<int> zero_layer(const Assessment& a, const std::vector<int>& item_indices,
                                   const SigmaSystem& sigma) {
  LinearSystem sys = sigma.lp();
  std::vector<int> out;
  for (size_t i = 0; i < item_indices.size(); ++i) {
    const Mask& hi = a.items[item_indices[i]].table.conditioning();
    std::vector<Rational> obj(sys.nvars, Rational(0));
    for (int h = 0; h < sys.nvars; ++h)
      if (hi.test(sigma.constituents[h])) obj[h] = 1;
    LpResult r = optimize(sys, obj, /*maximize=*/true);
    if (r.status != LpStatus::Optimal)
      throw std::logic_error("zero-layer probe on a solvable system must optimize");
    if (r.objective == 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

struct CheckLevel {
  std::vector<int> items;        // global item indices at this level
  std::vector<int> constituents; // sigma constituents
  bool feasible = false;
  std::vector<Rational> solution;   // lambda over `constituents` when feasible
  std::vector<int> zero_layer;      // global indices moved to the next level
};

struct DutchBook {
  std::vector<int> items;  // the sub-family the stakes bet on
  std::vector<Rational> stakes;
  Mask hn;  // gains are strictly one-signed on these constituents
};

struct CheckReport {
  bool coherent = false;
  std::vector<CheckLevel> levels;
  std::optional<DutchBook> witness;
};

inline Rational gain(const Assessment& a, const std::vector<Rational>& stakes, int constituent_id) {
  if (stakes.size() != a.items.size())
    throw LengthMismatch("stakes vector must match the family size");
  Rational g = 0;
  for (size_t i = 0; i < a.items.size(); ++i)
    g += stakes[i] * (a.items[i].table.value(constituent_id) - a.items[i].prevision);
  return g;
}

namespace detail {

inline Rational subfamily_gain(const Assessment& a, const std::vector<int>& items,
                               const std::vector<Rational>& stakes, int constituent_id) {
  Rational g = 0;
  for (size_t i = 0; i < items.size(); ++i)
    g += stakes[i] * (a.items[items[i]].table.value(constituent_id) - a.items[items[i]].prevision);
  return g;
}

}  // namespace detail

// Operative check: solve the sigma system; if solvable, restrict to the
// zero-layer sub-family and repeat. The item set strictly shrinks at every
// level, so the recursion terminates.
inline CheckReport check_coherence(const Assessment& a) {
  CheckReport report;
  std::vector<int> current(a.items.size());
  for (size_t i = 0; i < current.size(); ++i) current[i] = static_cast<int>(i);
  while (true) {
    SigmaSystem sigma = build_sigma(a, current);
    LpResult res = solve_feasibility(sigma.lp());
    CheckLevel level;
    level.items = current;
    level.constituents = sigma.constituents;
    if (res.status == LpStatus::Infeasible) {
      level.feasible = false;
      report.levels.push_back(std::move(level));
      report.coherent = false;
      DutchBook book;
      book.items = current;
      book.stakes.assign(res.farkas.begin(), res.farkas.begin() + current.size());
      book.hn = sigma.hn;
      bool all_neg = true, all_pos = true;
      for (int id : sigma.constituents) {
        Rational g = detail::subfamily_gain(a, current, book.stakes, id);
        all_neg = all_neg && g < 0;
        all_pos = all_pos && g > 0;
      }
      if (!all_neg && !all_pos)
        throw std::logic_error("internal error: extracted stakes are not uniformly one-signed");
      report.witness = std::move(book);
      return report;
    }
    level.feasible = true;
    level.solution = res.point;
    std::vector<int> zl = zero_layer(a, current, sigma);
    if (zl.size() >= current.size())
      throw std::logic_error("internal error: zero layer cannot cover the whole family");
    for (int rel : zl) level.zero_layer.push_back(current[rel]);
    std::vector<int> next = level.zero_layer;
    report.levels.push_back(std::move(level));
    if (next.empty()) {
      report.coherent = true;
      return report;
    }
    current = std::move(next);
  }
}

inline std::optional<DutchBook> dutch_book_witness(const Assessment& a) {
  return check_coherence(a).witness;
}

}  // namespace crq
