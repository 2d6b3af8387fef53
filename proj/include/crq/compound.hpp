#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crq/quantity.hpp"

namespace crq {

namespace detail {

inline std::string cond_paren(const ConditionalEvent& e) {
  if (e.antecedent.kind() == Formula::Kind::True) return e.consequent.str();
  return "(" + e.str() + ")";
}

inline std::string conj_label(const std::vector<ConditionalEvent>& events) {
  std::string out;
  for (size_t i = 0; i < events.size(); ++i) {
    if (i) out += " && ";
    out += cond_paren(events[i]);
  }
  return out;
}

inline std::string iter_label(const ConditionalEvent& target,
                              const std::vector<ConditionalEvent>& antecedent) {
  std::string rhs = antecedent.size() == 1 ? cond_paren(antecedent[0]) : "(" + conj_label(antecedent) + ")";
  if (antecedent.size() == 1 && antecedent[0].antecedent.kind() == Formula::Kind::True)
    rhs = "(" + antecedent[0].consequent.str() + ")";
  return cond_paren(target) + "|" + rhs;
}

}  // namespace detail

// Structured compound expression, independent of the concrete syntax.
class CompoundExpr {
 public:
  enum class Kind { Conditional, Conjunction, Iterated, MixedConjunction };

  static CompoundExpr conditional(ConditionalEvent e) {
    CompoundExpr x(Kind::Conditional);
    x.heads_.push_back(std::move(e));
    return x;
  }
  static CompoundExpr conjunction(std::vector<ConditionalEvent> events) {
    CompoundExpr x(Kind::Conjunction);
    x.events_ = std::move(events);
    return x;
  }
  static CompoundExpr iterated(ConditionalEvent target, std::vector<ConditionalEvent> antecedent) {
    CompoundExpr x(Kind::Iterated);
    x.heads_.push_back(std::move(target));
    x.events_ = std::move(antecedent);
    return x;
  }
  static CompoundExpr mixed_conjunction(ConditionalEvent cond, ConditionalEvent iter_target,
                                        std::vector<ConditionalEvent> iter_antecedent) {
    CompoundExpr x(Kind::MixedConjunction);
    x.heads_.push_back(std::move(cond));
    x.heads_.push_back(std::move(iter_target));
    x.events_ = std::move(iter_antecedent);
    return x;
  }

  Kind kind() const { return kind_; }
  const ConditionalEvent& event() const { return heads_[0]; }            // Conditional
  const std::vector<ConditionalEvent>& conjuncts() const { return events_; }  // Conjunction
  const ConditionalEvent& target() const {                               // Iterated / Mixed
    return kind_ == Kind::MixedConjunction ? heads_[1] : heads_[0];
  }
  const std::vector<ConditionalEvent>& antecedent() const { return events_; }
  const ConditionalEvent& mixed_conditional() const { return heads_[0]; }  // Mixed

  std::string str() const {
    switch (kind_) {
      case Kind::Conditional: return heads_[0].str();
      case Kind::Conjunction: return detail::conj_label(events_);
      case Kind::Iterated: return detail::iter_label(heads_[0], events_);
      case Kind::MixedConjunction:
        return detail::cond_paren(heads_[0]) + " && (" + detail::iter_label(heads_[1], events_) + ")";
    }
    return {};
  }

 private:
  explicit CompoundExpr(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<ConditionalEvent> heads_;
  std::vector<ConditionalEvent> events_;
};

// Canonical key under which an expression's own prevision is assessed. A
// mixed conjunction has none: its prevision is determined by its parts.
inline std::optional<CtxKey> expr_key(const EventSpace& space, const CompoundExpr& e) {
  switch (e.kind()) {
    case CompoundExpr::Kind::Conditional: return conditional_key(space, e.event());
    case CompoundExpr::Kind::Conjunction: return conjunction_key(space, e.conjuncts());
    case CompoundExpr::Kind::Iterated: return iterated_key(space, e.target(), e.antecedent());
    case CompoundExpr::Kind::MixedConjunction: return std::nullopt;
  }
  return std::nullopt;
}

// Conjunction of n conditional events. Value per constituent: 1 where every
// conjunct is true, 0 where one is false, and the assessed prevision of the
// void subset's sub-conjunction on the mixed patterns. Conditioning is the
// disjunction of the antecedents.
inline ValueTable conjunction_n(const std::shared_ptr<const EventSpace>& space,
                                const std::vector<ConditionalEvent>& events,
                                const AssessmentContext& ctx,
                                BuildMode mode = BuildMode::Checked) {
  if (events.empty()) throw std::invalid_argument("conjunction of zero conditionals");
  const int n = static_cast<int>(events.size());
  if (n == 1) {
    auto x = ctx.conditional(*space, events[0]);
    if (!x) throw MissingAssessment({events[0].str()});
    return indicator(space, events[0], *x, mode);
  }
  std::vector<Mask> scope(n), truth(n);
  Mask falsy(space->size());
  Mask conditioning(space->size());
  for (int i = 0; i < n; ++i) {
    scope[i] = space->mask_of(events[i].antecedent);
    if (scope[i].none()) throw EmptyAntecedent("empty antecedent in " + events[i].str());
    truth[i] = space->mask_of(events[i].consequent) & scope[i];
    falsy = falsy | scope[i].minus(truth[i]);
    conditioning = conditioning | scope[i];
  }

  // Bucket the mixed void patterns by their void index set.
  std::map<std::vector<int>, std::vector<int>> patterns;
  std::vector<Rational> v(space->size(), Rational(0));
  for (int id = 0; id < space->size(); ++id) {
    if (falsy.test(id)) continue;
    std::vector<int> voided;
    for (int i = 0; i < n; ++i)
      if (!scope[i].test(id)) voided.push_back(i);
    if (voided.empty()) {
      v[id] = 1;
      continue;
    }
    patterns[voided].push_back(id);
  }

  std::vector<std::string> missing;
  for (const auto& [voided, ids] : patterns) {
    std::optional<Rational> x;
    std::string label;
    if (voided.size() == 1) {
      x = ctx.conditional(*space, events[voided[0]]);
      label = events[voided[0]].str();
    } else {
      std::vector<ConditionalEvent> sub;
      for (int i : voided) sub.push_back(events[i]);
      x = ctx.get(conjunction_key(*space, sub));
      label = detail::conj_label(sub);
    }
    if (!x) {
      missing.push_back(label);
      continue;
    }
    if (mode == BuildMode::Checked && !is_probability(*x))
      throw OutOfRangeAssessment("assessment on " + label + " outside [0,1]: " + to_string(*x));
    for (int id : ids) v[id] = *x;
  }
  if (!missing.empty()) throw MissingAssessment(std::move(missing));
  return ValueTable(space, conditioning, std::move(v));
}

inline ValueTable conjunction2(const std::shared_ptr<const EventSpace>& space,
                               const ConditionalEvent& e1, const ConditionalEvent& e2,
                               const AssessmentContext& ctx, BuildMode mode = BuildMode::Checked) {
  return conjunction_n(space, {e1, e2}, ctx, mode);
}

namespace detail {

inline bool zero_on_conditioning(const ValueTable& t) {
  for (int id = 0; id < t.size(); ++id)
    if (t.conditioning().test(id) && t.value(id) != 0) return false;
  return true;
}

template <typename F>
std::optional<ValueTable> try_build(F&& f, std::vector<std::string>& missing) {
  try {
    return f();
  } catch (const MissingAssessment& e) {
    missing.insert(missing.end(), e.missing.begin(), e.missing.end());
    return std::nullopt;
  }
}

}  // namespace detail

// Generalized iterated conditional: the conjunction extended by the target
// plus mu times one minus the antecedent conjunction. The conditioning event
// is dynamic: the bet stands exactly where one of the two conjunctions is
// nonzero, which reproduces the x = 0 / x > 0 case split for the simple
// iterated conditional.
inline ValueTable generalized_iterated(const std::shared_ptr<const EventSpace>& space,
                                       const ConditionalEvent& target,
                                       const std::vector<ConditionalEvent>& antecedent,
                                       const AssessmentContext& ctx,
                                       BuildMode mode = BuildMode::Checked) {
  std::vector<std::string> missing;
  auto cn = detail::try_build([&] { return conjunction_n(space, antecedent, ctx, mode); }, missing);
  std::vector<ConditionalEvent> all = antecedent;
  all.push_back(target);
  auto cn1 = detail::try_build([&] { return conjunction_n(space, all, ctx, mode); }, missing);
  auto mu = ctx.get(iterated_key(*space, target, antecedent));
  std::string own = detail::iter_label(target, antecedent);
  if (!mu) missing.push_back(own);
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingAssessment(std::move(missing));
  }
  if (detail::zero_on_conditioning(*cn))
    throw DegenerateAntecedent("antecedent " + detail::conj_label(antecedent) +
                               " vanishes on its conditioning event");
  if (mode == BuildMode::Checked) {
    if (!is_probability(*mu))
      throw OutOfRangeAssessment("assessment on " + own + " outside [0,1]: " + to_string(*mu));
    auto zn = ctx.get(conjunction_key(*space, antecedent));
    auto zn1 = ctx.get(conjunction_key(*space, all));
    if (zn && zn1 && *zn1 != *mu * *zn)
      throw InconsistentContext("prevision of " + detail::conj_label(all) + " must equal " + own +
                                " times the antecedent's prevision");
  }
  std::vector<Rational> v(space->size());
  Mask conditioning(space->size());
  for (int id = 0; id < space->size(); ++id) {
    v[id] = cn1->value(id) + *mu * (Rational(1) - cn->value(id));
    if (cn->value(id) != 0 || cn1->value(id) != 0) conditioning.set(id);
  }
  return ValueTable(space, conditioning, std::move(v));
}

// Iterated conditional with a single conditional antecedent.
inline ValueTable iterated(const std::shared_ptr<const EventSpace>& space,
                           const ConditionalEvent& consequent, const ConditionalEvent& antecedent,
                           const AssessmentContext& ctx, BuildMode mode = BuildMode::Checked) {
  return generalized_iterated(space, consequent, {antecedent}, ctx, mode);
}

// Narrow-scope negation: complement to one. The negated quantity's assessed
// prevision is one minus the original's.
inline ValueTable negate_compound(const ValueTable& t) { return pw_complement(t); }

// Conjunction of a conditional event with a (simple) iterated conditional:
// the triple conjunction plus nu times the conjunction of the negated
// iterated antecedent with the conditional.
inline ValueTable mixed_conjunction(const std::shared_ptr<const EventSpace>& space,
                                    const ConditionalEvent& cond, const ConditionalEvent& iter_target,
                                    const std::vector<ConditionalEvent>& iter_antecedent,
                                    const AssessmentContext& ctx,
                                    BuildMode mode = BuildMode::Checked) {
  if (iter_antecedent.size() != 1)
    throw std::invalid_argument("mixed conjunction requires a simple iterated conditional");
  const ConditionalEvent& ah = iter_antecedent[0];
  std::vector<std::string> missing;
  auto triple = detail::try_build(
      [&] { return conjunction_n(space, {ah, iter_target, cond}, ctx, mode); }, missing);
  auto negpart = detail::try_build(
      [&] { return conjunction_n(space, {ah.negated(), cond}, ctx, mode); }, missing);
  auto nu = ctx.get(iterated_key(*space, iter_target, iter_antecedent));
  if (!nu) missing.push_back(detail::iter_label(iter_target, iter_antecedent));
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingAssessment(std::move(missing));
  }
  if (mode == BuildMode::Checked && !is_probability(*nu))
    throw OutOfRangeAssessment("assessment on " + detail::iter_label(iter_target, iter_antecedent) +
                               " outside [0,1]: " + to_string(*nu));
  Mask conditioning = space->mask_of(cond.antecedent) | space->mask_of(iter_target.antecedent) |
                      space->mask_of(ah.antecedent);
  std::vector<Rational> v(space->size());
  for (int id = 0; id < space->size(); ++id)
    v[id] = triple->value(id) + *nu * negpart->value(id);
  return ValueTable(space, conditioning, std::move(v));
}

// Dispatch a structured expression to its constructor.
inline ValueTable build_table(const std::shared_ptr<const EventSpace>& space,
                              const CompoundExpr& expr, const AssessmentContext& ctx,
                              BuildMode mode = BuildMode::Checked) {
  switch (expr.kind()) {
    case CompoundExpr::Kind::Conditional: {
      auto x = ctx.conditional(*space, expr.event());
      if (!x) throw MissingAssessment({expr.event().str()});
      return indicator(space, expr.event(), *x, mode);
    }
    case CompoundExpr::Kind::Conjunction:
      return conjunction_n(space, expr.conjuncts(), ctx, mode);
    case CompoundExpr::Kind::Iterated:
      return generalized_iterated(space, expr.target(), expr.antecedent(), ctx, mode);
    case CompoundExpr::Kind::MixedConjunction:
      return mixed_conjunction(space, expr.mixed_conditional(), expr.target(), expr.antecedent(),
                               ctx, mode);
  }
  throw std::logic_error("unreachable");
}

// Which conditioning event the dynamic case split selects for an iterated
// conditional: the antecedent-true region alone when the antecedent's
// probability is zero, extended by the void region otherwise.
struct IteratedConditioningReport {
  bool antecedent_positive = false;
  Mask conditioning;
};

inline IteratedConditioningReport iterated_conditioning(
    const std::shared_ptr<const EventSpace>& space, const ConditionalEvent& target,
    const std::vector<ConditionalEvent>& antecedent, const AssessmentContext& ctx) {
  ValueTable t = generalized_iterated(space, target, antecedent, ctx, BuildMode::Unchecked);
  std::optional<Rational> x;
  if (antecedent.size() == 1)
    x = ctx.conditional(*space, antecedent[0]);
  else
    x = ctx.get(conjunction_key(*space, antecedent));
  bool positive;
  if (x) {
    positive = *x > 0;
  } else {
    // No assessed prevision for the antecedent: read the void-region entries.
    ValueTable cn = conjunction_n(space, antecedent, ctx, BuildMode::Unchecked);
    positive = false;
    for (int id = 0; id < space->size(); ++id)
      if (!cn.conditioning().test(id) && cn.value(id) != 0) positive = true;
  }
  return {positive, t.conditioning()};
}

}  // namespace crq
