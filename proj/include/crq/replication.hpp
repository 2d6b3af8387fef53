#pragma once

#include <random>
#include <string>
#include <vector>

#include "crq/massmodel.hpp"
#include "crq/propagation.hpp"

namespace crq {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
  uint64_t seed = 0;
};

namespace replication {

inline Rational unit_rational(std::mt19937_64& rng, int max_den = 64) {
  std::uniform_int_distribution<int> d(1, max_den);
  int den = d(rng);
  std::uniform_int_distribution<int> n(0, den);
  return Rational(n(rng), den);
}

inline Rational interior_rational(std::mt19937_64& rng, int max_den = 64) {
  std::uniform_int_distribution<int> d(2, max_den);
  int den = d(rng);
  std::uniform_int_distribution<int> n(1, den - 1);
  return Rational(n(rng), den);
}

// Rational strictly between two bounds, biased away from the endpoints.
inline Rational between(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  Rational f = interior_rational(rng);
  return lo + (hi - lo) * f;
}

inline std::vector<Rational> positive_mass(std::mt19937_64& rng, int m, int max_weight = 64) {
  std::uniform_int_distribution<int> w(1, max_weight);
  std::vector<Rational> out(m);
  Rational total = 0;
  for (auto& v : out) {
    v = w(rng);
    total += v;
  }
  for (auto& v : out) v /= total;
  return out;
}

class Checker {
 public:
  Checker(std::string name, std::string description, uint64_t seed)
      : result_{std::move(name), true, std::move(description), seed} {}

  void require(bool ok, const std::string& on_fail) {
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.details += "; FAILED: " + on_fail;
    }
  }
  template <typename T>
  void require_eq(const T& got, const T& want, const std::string& what) {
    if (got != want && result_.pass) {
      result_.pass = false;
      result_.details += "; FAILED: " + what + " computed " + to_string(Rational(got)) +
                         ", expected " + to_string(Rational(want));
    }
  }
  bool ok() const { return result_.pass; }
  CheckResult take() && { return std::move(result_); }

 private:
  CheckResult result_;
};

inline Formula fa(const char* n) { return Formula::atom(n); }

// The antecedent-nested conditional over an event consequent: its table obeys
// the three-regime case split and coincides with the plain conditionals at
// the boundary regimes, with no pointwise order strictly inside.
inline CheckResult iterated_event_three_regimes(uint64_t seed, int trials) {
  Checker ck("iterated_event_three_regimes",
             "event given conditional: boundary regimes collapse to plain conditionals, interior "
             "regime admits no pointwise order",
             seed);
  std::mt19937_64 rng(seed);
  auto space = EventSpace::make({"A", "C", "D"});
  ConditionalEvent c_given_a(fa("C"), fa("A"));
  ConditionalEvent just_d(fa("D"));
  Formula ac = Formula::conj(fa("A"), fa("C"));
  Formula material = Formula::disj(ac, Formula::negate(fa("A")));
  Mask ac_m = space->mask_of(ac);
  Mask nota_d = space->mask_of(Formula::conj(Formula::negate(fa("A")), fa("D")));
  Mask nota_notd =
      space->mask_of(Formula::conj(Formula::negate(fa("A")), Formula::negate(fa("D"))));
  Mask a_notc = space->mask_of(Formula::conj(fa("A"), Formula::negate(fa("C"))));

  for (int k = 0; k < trials && ck.ok(); ++k) {
    // Zero regime: the iterated object is the conditional on the conjunction.
    Rational t = unit_rational(rng);
    AssessmentContext zero;
    zero.set(conditional_key(*space, c_given_a), Rational(0));
    zero.set(iterated_key(*space, just_d, {c_given_a}), t);
    ValueTable it0 = iterated(space, just_d, c_given_a, zero);
    ValueTable d_ac = indicator(space, ConditionalEvent(fa("D"), ac), t);
    ck.require(it0 == d_ac, "zero regime must equal the conjunction-conditioned event");

    // One regime: it is the conditional on the material counterpart.
    Rational nu = unit_rational(rng);
    AssessmentContext one;
    one.set(conditional_key(*space, c_given_a), Rational(1));
    one.set(iterated_key(*space, just_d, {c_given_a}), nu);
    ValueTable it1 = iterated(space, just_d, c_given_a, one);
    ValueTable d_mat = indicator(space, ConditionalEvent(fa("D"), material), nu);
    ck.require(it1 == d_mat, "unit regime must equal the material-conditioned event");

    // Interior regime: no pointwise order among the three objects.
    Rational x = interior_rational(rng);
    Rational mu = interior_rational(rng);
    Rational lo = mu * (1 - x), hi = x + mu * (1 - x);
    Rational tmid = between(rng, lo, hi);
    if (tmid == mu) continue;
    Rational numid = interior_rational(rng);
    AssessmentContext mid;
    mid.set(conditional_key(*space, c_given_a), x);
    mid.set(iterated_key(*space, just_d, {c_given_a}), mu);
    ValueTable itm = iterated(space, just_d, c_given_a, mid);
    ValueTable dm_ac = indicator(space, ConditionalEvent(fa("D"), ac), tmid,
                                 BuildMode::Unchecked);
    ValueTable dm_mat = indicator(space, ConditionalEvent(fa("D"), material), numid);

    // Case rows of the interior table.
    for (int id = 0; id < space->size(); ++id) {
      if (a_notc.test(id)) ck.require_eq(itm.value(id), mu, "antecedent-false row");
      if (nota_d.test(id)) ck.require_eq(itm.value(id), Rational(x + mu * (1 - x)),
                                         "void-consequent-true row");
      if (nota_notd.test(id)) ck.require_eq(itm.value(id), Rational(mu * (1 - x)),
                                            "void-consequent-false row");
    }
    auto exhibits_both = [&](const ValueTable& u, const ValueTable& v) {
      bool above = false, below = false;
      for (int id = 0; id < space->size(); ++id) {
        if (u.value(id) > v.value(id)) above = true;
        if (u.value(id) < v.value(id)) below = true;
      }
      return above && below;
    };
    ck.require(exhibits_both(dm_ac, itm), "no order vs the conjunction-conditioned event");
    ck.require(exhibits_both(itm, dm_mat), "no order vs the material-conditioned event");
    ck.require(exhibits_both(dm_ac, dm_mat), "no order between the two plain conditionals");
  }
  return std::move(ck).take();
}

inline CheckResult negation_complements_iterated_event(uint64_t seed, int trials) {
  Checker ck("negation_complements_iterated_event",
             "narrow-scope negation: the iterated event and its negation sum to one in every case",
             seed);
  std::mt19937_64 rng(seed + 1);
  auto space = EventSpace::make({"A", "C", "D"});
  ConditionalEvent c_given_a(fa("C"), fa("A"));
  ConditionalEvent just_d(fa("D")), not_d(Formula::negate(fa("D")));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    bool zero_regime = (k % 4 == 0);
    Rational x = zero_regime ? Rational(0) : interior_rational(rng);
    Rational mu = unit_rational(rng);
    AssessmentContext ctx;
    ctx.set(conditional_key(*space, c_given_a), x);
    ctx.set(iterated_key(*space, just_d, {c_given_a}), mu);
    ctx.set(iterated_key(*space, not_d, {c_given_a}), Rational(1) - mu);
    ValueTable pos = iterated(space, just_d, c_given_a, ctx);
    ValueTable neg = iterated(space, not_d, c_given_a, ctx);
    for (int id = 0; id < space->size() && ck.ok(); ++id)
      ck.require_eq(Rational(pos.value(id) + neg.value(id)), Rational(1), "row sum");
    ck.require(negate_compound(pos).values() == neg.values(),
               "complement-to-one must reproduce the negated construction");
  }
  return std::move(ck).take();
}

inline CheckResult self_consequent_boundary_cases(uint64_t seed, int trials) {
  Checker ck("self_consequent_boundary_cases",
             "antecedent's own consequent: boundary regimes equal the plain conditionals, with "
             "the zero regime constantly one",
             seed);
  std::mt19937_64 rng(seed + 2);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A"));
  ConditionalEvent just_a(fa("A"));
  Formula ac = Formula::conj(fa("A"), fa("C"));
  Formula material = Formula::disj(ac, Formula::negate(fa("A")));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    AssessmentContext zero;
    zero.set(conditional_key(*space, c_given_a), Rational(0));
    zero.set(iterated_key(*space, just_a, {c_given_a}), Rational(1));
    ValueTable it0 = iterated(space, just_a, c_given_a, zero);
    for (int id = 0; id < space->size(); ++id)
      ck.require_eq(it0.value(id), Rational(1), "zero-regime value");

    Rational nu = unit_rational(rng);
    AssessmentContext one;
    one.set(conditional_key(*space, c_given_a), Rational(1));
    one.set(iterated_key(*space, just_a, {c_given_a}), nu);
    ValueTable it1 = iterated(space, just_a, c_given_a, one);
    ck.require(it1 == indicator(space, ConditionalEvent(fa("A"), material), nu),
               "unit regime must equal the material-conditioned event");
  }
  return std::move(ck).take();
}

inline CheckResult self_consequent_prevision_is_prior(uint64_t seed, int trials) {
  Checker ck("self_consequent_prevision_is_prior",
             "prevision of the event given its own conditional equals the prior when the "
             "conditional has positive probability, and one at probability zero",
             seed);
  std::mt19937_64 rng(seed + 3);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    Rational x = (k % 5 == 0) ? Rational(0) : unit_rational(rng);
    Rational y = unit_rational(rng);
    Assessment base = make_assessment(space, {{CompoundExpr::conditional(c_given_a), x},
                                              {CompoundExpr::conditional(just_a), y}});
    Interval iv = extension_interval(base, CompoundExpr::iterated(just_a, {c_given_a}), {});
    if (x > 0) {
      ck.require(iv.lower == y && iv.upper == y, "prevision set must be the prior {" +
                                                      to_string(y) + "}, got [" +
                                                      to_string(iv.lower) + ", " +
                                                      to_string(iv.upper) + "]");
    } else {
      ck.require(iv.lower == 1 && iv.upper == 1, "prevision set at probability zero must be {1}");
    }
  }
  return std::move(ck).take();
}

inline CheckResult sandwich_order_of_projections(uint64_t seed, int trials) {
  Checker ck("sandwich_order_of_projections",
             "conjunction-conditioned, iterated, and material-conditioned events are pointwise "
             "ordered with the iterated object in the middle",
             seed);
  std::mt19937_64 rng(seed + 4);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  Formula ac = Formula::conj(fa("A"), fa("C"));
  Formula material = Formula::disj(ac, Formula::negate(fa("A")));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    Rational x = m.cond_prob(c_given_a);
    Rational mu = m.prob(fa("A"));
    Rational nu = m.cond_prob(ConditionalEvent(fa("A"), material));
    AssessmentContext ctx;
    ctx.set(conditional_key(*space, c_given_a), x);
    ctx.set(iterated_key(*space, just_a, {c_given_a}), mu);
    ValueTable lower = indicator(space, ConditionalEvent(fa("A"), material), nu);
    ValueTable middle = iterated(space, just_a, c_given_a, ctx);
    ValueTable upper = indicator(space, ConditionalEvent(fa("A"), ac), Rational(1));
    for (int id = 0; id < space->size() && ck.ok(); ++id) {
      ck.require(lower.value(id) <= middle.value(id), "lower bound fails pointwise");
      ck.require(middle.value(id) <= upper.value(id), "upper bound fails pointwise");
      ck.require_eq(upper.value(id), Rational(1), "upper object");
    }
    ck.require(nu <= mu && mu <= 1, "prevision chain");
  }
  return std::move(ck).take();
}

inline CheckResult prevision_fixed_point_identity(uint64_t seed, int trials) {
  Checker ck("prevision_fixed_point_identity",
             "the iterated prevision solves mu = nu + mu(1-x)(1-nu) and rederives the prior via "
             "nu = xy/(xy+1-y)",
             seed);
  std::mt19937_64 rng(seed + 5);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  Formula material = Formula::disj(Formula::conj(fa("A"), fa("C")), Formula::negate(fa("A")));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    Rational x = m.cond_prob(c_given_a);
    Rational y = m.prob(fa("A"));
    Rational nu = m.cond_prob(ConditionalEvent(fa("A"), material));
    Assessment base = make_assessment(space, {{CompoundExpr::conditional(c_given_a), x},
                                              {CompoundExpr::conditional(just_a), y}});
    Interval iv = extension_interval(base, CompoundExpr::iterated(just_a, {c_given_a}), {});
    ck.require(iv.lower == iv.upper, "prevision set must be a single point");
    Rational mu = iv.lower;
    ck.require_eq(mu, Rational(nu + mu * (1 - x) * (1 - nu)), "fixed-point identity");
    ck.require_eq(nu, Rational(x * y / (x * y + 1 - y)), "material-conditional probability");
    ck.require_eq(mu, y, "prior preservation");
  }
  return std::move(ck).take();
}

inline CheckResult consequent_affirmation_bounds(uint64_t seed, int trials) {
  Checker ck("consequent_affirmation_bounds",
             "inferring the antecedent from the consequent and the conditional: the closed upper "
             "bound matches the propagated interval, including the diagonal",
             seed);
  std::mt19937_64 rng(seed + 6);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent just_c(fa("C")), c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  auto run_point = [&](const Rational& x, const Rational& y) {
    Assessment base = make_assessment(space, {{CompoundExpr::conditional(just_c), x},
                                              {CompoundExpr::conditional(c_given_a), y}});
    Interval iv = extension_interval(base, CompoundExpr::conditional(just_a), {});
    Interval closed = ac_bounds(x, y);
    ck.require(iv.lower == closed.lower && iv.upper == closed.upper,
               "bound mismatch at (" + to_string(x) + ", " + to_string(y) + "): propagated [" +
                   to_string(iv.lower) + ", " + to_string(iv.upper) + "], closed [" +
                   to_string(closed.lower) + ", " + to_string(closed.upper) + "]");
  };
  for (int xi = 0; xi <= 4 && ck.ok(); ++xi)
    for (int yi = 0; yi <= 4 && ck.ok(); ++yi) run_point(Rational(xi, 4), Rational(yi, 4));
  for (int k = 0; k < std::min(trials, 24) && ck.ok(); ++k) {
    Rational x = unit_rational(rng, 16), y = unit_rational(rng, 16);
    run_point(x, y);
    run_point(x, x);  // exercise the knife-edge diagonal
  }
  return std::move(ck).take();
}

inline CheckResult strengthened_antecedent_raises_belief(uint64_t seed, int trials) {
  Checker ck("strengthened_antecedent_raises_belief",
             "adding the consequent event to the antecedent: prevision equals the probability of "
             "the event given the disjunction and dominates both prior and conditional prior",
             seed);
  std::mt19937_64 rng(seed + 7);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_c(fa("C")), just_a(fa("A"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    std::vector<std::pair<CompoundExpr, Rational>> items;
    for (const Formula& f : {fa("A"), fa("C"), Formula::conj(fa("A"), fa("C"))})
      items.emplace_back(CompoundExpr::conditional(ConditionalEvent(f)), m.prob(f));
    Assessment base = make_assessment(space, items);
    AssessmentContext ctx;
    ctx.set(conditional_key(*space, c_given_a), m.cond_prob(c_given_a));
    ctx.set(conditional_key(*space, just_c), m.prob(fa("C")));
    Interval iv = extension_interval(base, CompoundExpr::iterated(just_a, {c_given_a, just_c}), ctx);
    ck.require(iv.lower == iv.upper, "prevision set must be a single point");
    Rational expected = m.prob(fa("A")) / m.prob(Formula::disj(fa("A"), fa("C")));
    ck.require_eq(iv.lower, expected, "event given disjunction");
    ck.require(iv.lower >= m.prob(fa("A")), "must dominate the prior");
    ck.require(iv.lower >= m.cond_prob(ConditionalEvent(fa("A"), fa("C"))),
               "must dominate the conditional prior");
  }
  return std::move(ck).take();
}

inline CheckResult conditional_strengthening_disjunction(uint64_t seed, int trials) {
  Checker ck("conditional_strengthening_disjunction",
             "adding a conditional to the antecedent: prevision equals the probability of the "
             "antecedents' disjunction when the triple conjunction is possible",
             seed);
  std::mt19937_64 rng(seed + 8);
  auto space = EventSpace::make({"A", "C", "H"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), a_given_h(fa("A"), fa("H")), just_a(fa("A"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    std::vector<std::pair<CompoundExpr, Rational>> items;
    for (const Formula& f :
         {fa("A"), fa("C"), fa("H"), Formula::conj(fa("A"), fa("C")),
          Formula::conj(fa("A"), fa("H")), Formula::conj(fa("C"), fa("H")),
          Formula::conj(Formula::conj(fa("A"), fa("C")), fa("H"))})
      items.emplace_back(CompoundExpr::conditional(ConditionalEvent(f)), m.prob(f));
    Assessment base = make_assessment(space, items);
    AssessmentContext ctx;
    m.fill_conjunction({c_given_a, a_given_h}, ctx);
    Interval iv =
        extension_interval(base, CompoundExpr::iterated(just_a, {c_given_a, a_given_h}), ctx);
    ck.require(iv.lower == iv.upper, "prevision set must be a single point");
    ck.require_eq(iv.lower, m.prob(Formula::disj(fa("A"), fa("H"))),
                  "disjunction probability");
    ck.require(iv.lower >= m.prob(fa("A")), "must dominate the prior");
  }
  return std::move(ck).take();
}

inline CheckResult conjunction_absorbs_self_iterated(uint64_t seed, int trials) {
  Checker ck("conjunction_absorbs_self_iterated",
             "conjoining a conditional with an iterated conditional over it reduces to the "
             "conjunction with the bare consequent",
             seed);
  std::mt19937_64 rng(seed + 9);
  auto space = EventSpace::make({"A", "C", "K"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_k(fa("K"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    AssessmentContext ctx;
    m.fill_conjunction({c_given_a, just_k}, ctx);
    m.fill_iterated(just_k, {c_given_a}, ctx);
    m.fill_conjunction({c_given_a.negated(), c_given_a}, ctx);
    m.fill_conjunction({c_given_a, just_k, c_given_a}, ctx);
    ValueTable mixed = mixed_conjunction(space, c_given_a, just_k, {c_given_a}, ctx);
    ValueTable plain = conjunction2(space, c_given_a, just_k, ctx);
    ck.require(mixed.values() == plain.values() && mixed.conditioning() == plain.conditioning(),
               "tables must coincide");
  }
  return std::move(ck).take();
}

inline CheckResult compound_prevision_product(uint64_t seed, int trials) {
  Checker ck("compound_prevision_product",
             "previsions multiply: conjunction prevision equals the iterated prevision times the "
             "antecedent's, for simple and extended antecedents",
             seed);
  std::mt19937_64 rng(seed + 10);
  auto space = EventSpace::make({"A", "B", "C"});
  ConditionalEvent e1(fa("C"), fa("A")), e2(fa("B"), fa("C")), e3(fa("A"), fa("B"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    AssessmentContext ctx;
    Rational x = m.fill_conjunction({e1}, ctx);
    Rational z2 = m.fill_conjunction({e1, e2}, ctx);
    Rational mu = m.fill_iterated(e2, {e1}, ctx);
    ck.require_eq(z2, Rational(mu * x), "pairwise product");
    Rational z3 = m.fill_conjunction({e1, e2, e3}, ctx);
    Rational mu3 = m.fill_iterated(e3, {e1, e2}, ctx);
    ck.require_eq(z3, Rational(mu3 * z2), "extended product");
    // The displayed tables are consistent with those previsions.
    ValueTable it = iterated(space, e2, e1, ctx);
    Rational expect = 0;
    for (int id = 0; id < space->size(); ++id) expect += m.mass()[id] * it.value(id);
    ck.require_eq(expect, mu, "table expectation");
  }
  return std::move(ck).take();
}

inline CheckResult conjunction_monotone_in_length(uint64_t seed, int trials) {
  Checker ck("conjunction_monotone_in_length",
             "extending a conjunction can only lower its value, pointwise in every case", seed);
  std::mt19937_64 rng(seed + 11);
  auto space = EventSpace::make({"A", "B", "C"});
  ConditionalEvent e1(fa("C"), fa("A")), e2(fa("B"), fa("C")), e3(fa("A"), fa("B")),
      e4(fa("B"), fa("A"));
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    AssessmentContext ctx;
    m.fill_conjunction({e1, e2, e3, e4}, ctx);
    ValueTable c1 = conjunction_n(space, {e1}, ctx);
    ValueTable c2 = conjunction_n(space, {e1, e2}, ctx);
    ValueTable c3 = conjunction_n(space, {e1, e2, e3}, ctx);
    ValueTable c4 = conjunction_n(space, {e1, e2, e3, e4}, ctx);
    for (int id = 0; id < space->size() && ck.ok(); ++id) {
      ck.require(c2.value(id) <= c1.value(id), "length two vs one");
      ck.require(c3.value(id) <= c2.value(id), "length three vs two");
      ck.require(c4.value(id) <= c3.value(id), "length four vs three");
    }
  }
  return std::move(ck).take();
}

inline CheckResult import_export_fails_without_triviality(uint64_t seed, int trials) {
  Checker ck("import_export_fails_without_triviality",
             "the conditional's probability decomposes over consequent-conditioned iterates "
             "while the consequent-true iterate stays below one",
             seed);
  std::mt19937_64 rng(seed + 12);
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A"));
  ConditionalEvent just_c(fa("C")), not_c(Formula::negate(fa("C")));
  int generic = 0;
  for (int k = 0; k < trials && ck.ok(); ++k) {
    MassModel m(space, positive_mass(rng, space->size()));
    Rational x = m.cond_prob(c_given_a);
    std::vector<std::pair<CompoundExpr, Rational>> items;
    for (const Formula& f : {fa("A"), fa("C"), Formula::conj(fa("A"), fa("C"))})
      items.emplace_back(CompoundExpr::conditional(ConditionalEvent(f)), m.prob(f));
    Assessment base = make_assessment(space, items);
    AssessmentContext ctx;
    ctx.set(conditional_key(*space, c_given_a), x);
    ctx.set(conditional_key(*space, just_c), m.prob(fa("C")));
    Interval given_c =
        extension_interval(base, CompoundExpr::iterated(c_given_a, {just_c}), ctx);
    Interval given_not_c =
        extension_interval(base, CompoundExpr::iterated(c_given_a, {not_c}), ctx);
    ck.require(given_c.lower == given_c.upper && given_not_c.lower == given_not_c.upper,
               "prevision sets must be single points");
    Rational recomposed =
        given_c.lower * m.prob(fa("C")) + given_not_c.lower * (1 - m.prob(fa("C")));
    ck.require_eq(recomposed, x, "total-prevision decomposition");
    if (given_c.lower != 1) ++generic;
  }
  ck.require(generic >= trials / 2,
             "the consequent-conditioned iterate must differ from one on generic samples");
  return std::move(ck).take();
}

inline CheckResult uncorrelation_is_not_independence(uint64_t seed, int trials) {
  Checker ck("uncorrelation_is_not_independence",
             "product-form previsions express uncorrelation, not stochastic independence", seed);
  std::mt19937_64 rng(seed + 13);
  // A three-valued quantity and its square.
  Formula p1 = fa("P1"), p2 = fa("P2");
  auto tri = EventSpace::make({"P1", "P2"}, {Formula::conj(p1, p2)});
  std::map<int, Rational> xv{{0, Rational(1)}, {1, Rational(-1)}, {2, Rational(0)}};
  ValueTable x = make_crq(tri, xv, Formula::constant(true), Rational(0));
  ValueTable y = pw_mul(x, x);
  std::vector<Rational> third(3, Rational(1, 3));
  ck.require_eq(prevision_under_mass(x, third), Rational(0), "first moment");
  ck.require_eq(prevision_under_mass(y, third), Rational(2, 3), "square's expectation");
  ck.require_eq(prevision_under_mass(pw_mul(x, y), third), Rational(0), "cross moment");
  Rational p_both = 0, p_x1 = 0, p_y1 = 0;
  for (int id = 0; id < tri->size(); ++id) {
    if (x.value(id) == 1 && y.value(id) == 1) p_both += third[id];
    if (x.value(id) == 1) p_x1 += third[id];
    if (y.value(id) == 1) p_y1 += third[id];
  }
  ck.require_eq(p_both, Rational(1, 3), "joint value probability");
  ck.require_eq(Rational(p_x1 * p_y1), Rational(2, 9), "product of value probabilities");
  ck.require(p_both != p_x1 * p_y1, "independence must fail for the square");

  // The conditional and its own antecedent event.
  auto ac = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  MassModel half(ac, {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  ValueTable cond = indicator(ac, c_given_a, half.cond_prob(c_given_a));
  ValueTable av = indicator(ac, just_a, half.prob(fa("A")));
  Rational product = prevision_under_mass(pw_mul(cond, av), half.mass());
  ck.require_eq(product, Rational(1, 4), "prevision of the product");
  ck.require_eq(Rational(half.cond_prob(c_given_a) * half.prob(fa("A"))), Rational(1, 4),
                "product of previsions");
  // P((C|A)=1 and A=1) = P(AC) = 1/4 while P(A=1) P((C|A)=1) = 1/2 * 1/4.
  ck.require(Rational(1, 4) != Rational(1, 8), "independence must fail for the conditional");

  // Conditionals on incompatible antecedents multiply.
  Formula h = fa("H"), kf = fa("K");
  auto disj = EventSpace::make({"A", "H", "B", "K"}, {Formula::conj(h, kf)});
  ConditionalEvent a_h(fa("A"), h), b_k(fa("B"), kf);
  for (int k = 0; k < std::min(trials, 16) && ck.ok(); ++k) {
    MassModel m(disj, positive_mass(rng, disj->size()));
    Rational xa = m.cond_prob(a_h), yb = m.cond_prob(b_k);
    AssessmentContext ctx;
    ctx.set(conditional_key(*disj, a_h), xa);
    ctx.set(conditional_key(*disj, b_k), yb);
    ctx.set(conjunction_key(*disj, {a_h, b_k}), Rational(0));  // placeholder for the void rows
    ValueTable t = conjunction2(disj, a_h, b_k, ctx, BuildMode::Unchecked);
    Rational z = m.conditional_prevision(t);
    ck.require_eq(z, Rational(xa * yb), "incompatible antecedents' product rule");
  }
  return std::move(ck).take();
}

inline CheckResult closest_world_probability_differs(uint64_t seed, int) {
  Checker ck("closest_world_probability_differs",
             "a closest-world conditional over four equiprobable worlds takes probability 3/4 or "
             "1/4, never the conditional probability 1/2",
             seed);
  auto space = EventSpace::make({"A", "C"});
  MassModel m(space, {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  // Closest-world truth sets: with the conjunction world nearest, the
  // conditional holds at AC, ~A C, ~A ~C; with the other choice only at AC.
  Rational near_conj = m.prob(Formula::disj(Formula::conj(fa("A"), fa("C")),
                                            Formula::negate(fa("A"))));
  Rational near_gap = m.prob(Formula::conj(fa("A"), fa("C")));
  Rational cond = m.cond_prob(ConditionalEvent(fa("C"), fa("A")));
  ck.require_eq(near_conj, Rational(3, 4), "conjunction-nearest closest-world probability");
  ck.require_eq(near_gap, Rational(1, 4), "gap-nearest closest-world probability");
  ck.require_eq(cond, Rational(1, 2), "conditional probability");
  ck.require(near_conj != cond && near_gap != cond,
             "closest-world probabilities must differ from the conditional probability");
  return std::move(ck).take();
}

}  // namespace replication

// Deterministic, seed-reproducible suite over the library's named results.
inline std::vector<CheckResult> run_suite(uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  using Fn = CheckResult (*)(uint64_t, int);
  static const Fn checks[] = {
      replication::iterated_event_three_regimes,
      replication::negation_complements_iterated_event,
      replication::self_consequent_boundary_cases,
      replication::self_consequent_prevision_is_prior,
      replication::sandwich_order_of_projections,
      replication::prevision_fixed_point_identity,
      replication::consequent_affirmation_bounds,
      replication::strengthened_antecedent_raises_belief,
      replication::conditional_strengthening_disjunction,
      replication::conjunction_absorbs_self_iterated,
      replication::compound_prevision_product,
      replication::conjunction_monotone_in_length,
      replication::import_export_fails_without_triviality,
      replication::uncorrelation_is_not_independence,
      replication::closest_world_probability_differs,
  };
  std::vector<CheckResult> out;
  for (const Fn& fn : checks) out.push_back(fn(seed, trials));
  return out;
}

}  // namespace crq
