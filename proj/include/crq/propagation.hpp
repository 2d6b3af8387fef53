#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crq/coherence.hpp"
#include "crq/compound.hpp"

namespace crq {

struct IncoherentBase : std::runtime_error {
  IncoherentBase() : std::runtime_error("base assessment is incoherent") {}
};
struct DegenerateTarget : std::runtime_error {
  explicit DegenerateTarget(const std::string& what) : std::runtime_error(what) {}
};
struct IncoherentTriple : std::runtime_error {
  explicit IncoherentTriple(const std::string& what) : std::runtime_error(what) {}
};
struct NotPConsistent : std::runtime_error {
  NotPConsistent() : std::runtime_error("premise family is not p-consistent") {}
};

// Closed interval of coherent extension values. Endpoints are exact when the
// boundary was pinned to a rational; otherwise they carry a bracket of at
// most `tolerance`.
struct Interval {
  Rational lower;
  Rational upper;
  bool lower_exact = true;
  bool upper_exact = true;
  Rational tolerance = 0;
  bool verified_interval = true;
  std::vector<std::string> notes;

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lower == b.lower && a.upper == b.upper && a.lower_exact == b.lower_exact &&
           a.upper_exact == b.upper_exact;
  }
};

inline Interval exact_interval(Rational lo, Rational hi) {
  Interval iv;
  iv.lower = std::move(lo);
  iv.upper = std::move(hi);
  return iv;
}

inline Interval frechet_bounds(const Rational& x, const Rational& y) {
  if (!is_probability(x) || !is_probability(y))
    throw OutOfRangeAssessment("frechet bounds need probabilities in [0,1]");
  Rational lo = x + y - 1;
  if (lo < 0) lo = 0;
  return exact_interval(lo, std::min(x, y));
}

inline Interval ac_bounds(const Rational& x, const Rational& y) {
  if (!is_probability(x) || !is_probability(y))
    throw OutOfRangeAssessment("consequent-affirmation bounds need probabilities in [0,1]");
  Rational hi;
  if (x == y)
    hi = 1;
  else if (x < y)
    hi = x / y;
  else
    hi = (Rational(1) - x) / (Rational(1) - y);
  return exact_interval(0, hi);
}

struct MuSet {
  bool full_interval = false;  // true only in the zero-antecedent branch
  Interval interval;
};

// Coherent prevision values for the simple iterated conditional given a
// coherent (x, y, z) on the pair and their conjunction: the single point z/x
// when x > 0, the whole unit interval when x = 0.
inline MuSet iterated_coherent_set(const Rational& x, const Rational& y, const Rational& z) {
  Interval fh = frechet_bounds(x, y);
  if (z < fh.lower || z > fh.upper)
    throw IncoherentTriple("(x,y,z) = (" + to_string(x) + "," + to_string(y) + "," + to_string(z) +
                           ") violates the conjunction bounds");
  if (x == 0) return {true, exact_interval(0, 1)};
  Rational mu = z / x;
  return {false, exact_interval(mu, mu)};
}

namespace detail {

inline BigInt floor_rational(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

// Smallest-denominator rational strictly inside (a, b): continued-fraction walk.
inline Rational simplest_strictly_between(const Rational& a, const Rational& b) {
  if (!(a < b)) throw std::logic_error("simplest_strictly_between needs a < b");
  if (a < 0 && b > 0) return Rational(0);
  if (a < 0) return -simplest_strictly_between(-b, -a);
  BigInt m = floor_rational(a);
  if (Rational(m + 1) < b) return Rational(m + 1);
  Rational fa = a - Rational(m), fb = b - Rational(m);  // 0 <= fa < fb <= 1
  if (fa == 0) {
    BigInt q = floor_rational(Rational(1) / fb) + 1;
    return Rational(m) + Rational(BigInt(1), q);
  }
  return Rational(m) + Rational(1) / simplest_strictly_between(Rational(1) / fb, Rational(1) / fa);
}

// Simplest rational in the interval with the given endpoint inclusions:
// smallest denominator wins, ties go to the smaller value.
inline Rational simplest_in(const Rational& a, const Rational& b, bool include_lo,
                            bool include_hi) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& r) {
    if (!best || denominator(r) < denominator(*best) ||
        (denominator(r) == denominator(*best) && r < *best))
      best = r;
  };
  if (a < b) consider(simplest_strictly_between(a, b));
  if (include_lo) consider(a);
  if (include_hi) consider(b);
  if (!best) throw std::logic_error("simplest_in called on an empty interval");
  return *best;
}

}  // namespace detail

struct ExtensionOptions {
  Rational tolerance = rational_pow2(-40);
  // Exactness promotion bound: a boundary whose denominator exceeds this is
  // reported bracketed instead. With tolerance 2^-40, distinct rationals with
  // denominators below 2^20 cannot share a bracket, so the simplest rational
  // found there is the boundary itself.
  BigInt exact_denominator_limit = BigInt(1) << 20;
  int scan_denominator_limit = 32;
  int max_refinement_probes = 64;
};

namespace detail {

class ExtensionProbe {
 public:
  ExtensionProbe(const Assessment& base, const CompoundExpr& target, AssessmentContext ctx)
      : base_(base), target_(target), ctx_(std::move(ctx)), key_(expr_key(*base.space, target)) {}

  bool operator()(const Rational& t) {
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
    bool ok;
    try {
      Assessment ext = base_;
      ext.items.push_back({target_, table_at(t), t, target_.str()});
      ok = check_coherence(ext).coherent;
    } catch (const DegenerateAntecedent& e) {
      throw DegenerateTarget(e.what());
    }
    memo_.emplace(t, ok);
    return ok;
  }

  ValueTable table_at(const Rational& t) {
    AssessmentContext c2 = ctx_;
    if (key_) c2.set(*key_, t);
    try {
      return build_table(base_.space, target_, c2, BuildMode::Unchecked);
    } catch (const DegenerateAntecedent& e) {
      throw DegenerateTarget(e.what());
    }
  }

 private:
  const Assessment& base_;
  const CompoundExpr& target_;
  AssessmentContext ctx_;
  std::optional<CtxKey> key_;
  std::map<Rational, bool> memo_;
};

// Candidate coherent values from the affine structure of the target table:
// every solution of the base system determines the fixed point
// t = sum(alpha)/(1 - sum(beta)) of the target's prevision row.
inline std::vector<Rational> fixed_point_candidates(const Assessment& base,
                                                    const ValueTable& t0, const ValueTable& t1) {
  std::vector<Rational> out;
  const EventSpace& space = *base.space;
  Mask hn = t0.conditioning();
  for (const auto& it : base.items) hn = hn | it.table.conditioning();
  std::vector<int> cons;
  for (int id = 0; id < space.size(); ++id)
    if (hn.test(id)) cons.push_back(id);

  LinearSystem sys;
  sys.nvars = static_cast<int>(cons.size());
  sys.nonneg.assign(sys.nvars, true);
  for (const auto& it : base.items) {
    LinRow row;
    row.a.resize(sys.nvars);
    for (int h = 0; h < sys.nvars; ++h) row.a[h] = it.table.value(cons[h]);
    row.b = it.prevision;
    sys.eq.push_back(std::move(row));
  }
  LinRow norm;
  norm.a.assign(sys.nvars, Rational(1));
  norm.b = 1;
  sys.eq.push_back(std::move(norm));

  std::vector<std::vector<Rational>> lambdas;
  LpResult feas = solve_feasibility(sys);
  if (feas.status != LpStatus::Feasible) return out;
  lambdas.push_back(feas.point);

  std::vector<Rational> alpha(sys.nvars), beta(sys.nvars);
  for (int h = 0; h < sys.nvars; ++h) {
    alpha[h] = t0.value(cons[h]);
    beta[h] = t1.value(cons[h]) - t0.value(cons[h]);
  }
  for (const auto& obj : {alpha, beta}) {
    for (bool maximize : {false, true}) {
      LpResult r = optimize(sys, obj, maximize);
      if (r.status == LpStatus::Optimal) lambdas.push_back(r.point);
    }
  }
  // Mass-maximizing solutions per conditioning event, target's included.
  std::vector<Mask> masks;
  masks.push_back(t0.conditioning());
  for (const auto& it : base.items) masks.push_back(it.table.conditioning());
  for (const auto& m : masks) {
    std::vector<Rational> obj(sys.nvars, Rational(0));
    for (int h = 0; h < sys.nvars; ++h)
      if (m.test(cons[h])) obj[h] = 1;
    LpResult r = optimize(sys, obj, /*maximize=*/true);
    if (r.status == LpStatus::Optimal) lambdas.push_back(r.point);
  }

  for (const auto& lam : lambdas) {
    Rational a = 0, b = 0;
    for (int h = 0; h < sys.nvars; ++h) {
      a += alpha[h] * lam[h];
      b += beta[h] * lam[h];
    }
    if (b == 1) continue;
    Rational t = a / (Rational(1) - b);
    if (t >= 0 && t <= 1) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// The set of values t for which base + (target = t) stays coherent, reported
// as a closed interval. Endpoints are located by bisection on the coherence
// predicate and promoted to exact rationals via a simplest-rational search in
// the final bracket; interval structure itself is verified by interior probes.
inline Interval extension_interval(const Assessment& base, const CompoundExpr& target,
                                   const AssessmentContext& ctx,
                                   const ExtensionOptions& opts = {}) {
  if (!check_coherence(base).coherent) throw IncoherentBase();
  // The base's own previsions are known context; explicit entries win.
  AssessmentContext merged;
  for (const auto& item : base.items)
    if (item.expr)
      if (auto k = expr_key(*base.space, *item.expr)) merged.set(*k, item.prevision);
  for (const auto& [k, v] : ctx.entries()) merged.set(k, v);
  detail::ExtensionProbe probe(base, target, merged);

  Interval out;
  out.tolerance = opts.tolerance;

  // Seed: a coherent value to bisect from.
  std::optional<Rational> seed;
  std::vector<Rational> candidates;
  {
    ValueTable t0 = probe.table_at(0);
    ValueTable t1 = probe.table_at(1);
    ValueTable th = probe.table_at(Rational(1, 2));
    bool affine = t0.conditioning() == t1.conditioning();
    if (affine)
      for (int id = 0; id < t0.size() && affine; ++id)
        affine = th.value(id) * 2 == t0.value(id) + t1.value(id);
    if (affine)
      candidates = detail::fixed_point_candidates(base, t0, t1);
  }
  for (const Rational& t : {Rational(0), Rational(1), Rational(1, 2), Rational(1, 4), Rational(3, 4)})
    candidates.push_back(t);
  for (const Rational& t : candidates)
    if (probe(t)) {
      seed = t;
      break;
    }
  if (!seed) {
    // Last resort: ascending-denominator scan of the unit interval.
    for (int q = 1; q <= opts.scan_denominator_limit && !seed; ++q)
      for (int p = 0; p <= q && !seed; ++p) {
        Rational t(p, q);
        if (probe(t)) seed = t;
      }
  }
  if (!seed)
    throw std::runtime_error("no coherent extension value found by probing; "
                             "the coherent set appears to be empty");

  // Locate one endpoint: the predicate holds at `good` and fails at `bad`.
  // `toward_lower` searches below the seed, the other call above it. The
  // boundary sits in (bad, good] below the seed, [good, bad) above it.
  // Bisection runs in stages: after a coarse pass the simplest rational of
  // the bracket is probed together with its tolerance-shifted neighbour,
  // which pins grid-representable boundaries with a handful of probes.
  auto locate = [&](Rational bad, Rational good, bool toward_lower, Rational& value, bool& exact) {
    if (probe(bad)) {
      value = bad;
      exact = true;
      return;
    }
    auto width = [&] { return toward_lower ? Rational(good - bad) : Rational(bad - good); };
    auto bisect_to = [&](const Rational& w) {
      while (width() > w) {
        Rational mid = (bad + good) / 2;
        if (probe(mid))
          good = mid;
        else
          bad = mid;
      }
    };
    bisect_to(rational_pow2(-10));
    int budget = opts.max_refinement_probes;
    while (budget > 0) {
      Rational r = toward_lower ? detail::simplest_in(bad, good, false, true)
                                : detail::simplest_in(good, bad, true, false);
      if (!probe(r)) {
        --budget;
        if (r == good) break;
        bad = r;
        continue;
      }
      // r is coherent; check whether the boundary can still be past it.
      Rational s = toward_lower ? Rational(r - opts.tolerance) : Rational(r + opts.tolerance);
      bool s_inside = toward_lower ? s > bad : s < bad;
      if (s_inside && probe(s)) {
        good = s;  // boundary lies beyond s: keep searching in (bad, s]
        budget -= 2;
        continue;
      }
      // The boundary now sits in a bracket of at most one tolerance around r
      // and r is the bracket's simplest rational: distinct rationals with
      // denominators below the promotion limit cannot both fit, so r is the
      // boundary itself whenever the boundary's denominator is modest.
      value = r;
      exact = denominator(r) <= opts.exact_denominator_limit;
      return;
    }
    bisect_to(opts.tolerance);
    value = good;
    exact = false;
  };

  bool lo_exact = true, hi_exact = true;
  Rational lo_val, hi_val;
  locate(Rational(0), *seed, /*toward_lower=*/true, lo_val, lo_exact);
  locate(Rational(1), *seed, /*toward_lower=*/false, hi_val, hi_exact);
  out.lower = lo_val;
  out.upper = hi_val;
  out.lower_exact = lo_exact;
  out.upper_exact = hi_exact;

  // Defensive: the coherent set is expected to be an interval; probe the
  // interior and report if that ever fails.
  if (out.lower < out.upper) {
    for (const Rational& f : {Rational(1, 2), Rational(1, 4), Rational(3, 4)}) {
      Rational t = out.lower + (out.upper - out.lower) * f;
      if (!probe(t)) {
        out.verified_interval = false;
        out.notes.push_back("interior value " + to_string(t) +
                            " is incoherent; coherent set is not an interval");
      }
    }
  }
  return out;
}

inline bool p_consistent(const std::shared_ptr<const EventSpace>& space,
                         const std::vector<ConditionalEvent>& family) {
  std::vector<std::pair<CompoundExpr, Rational>> items;
  for (const auto& e : family) items.emplace_back(CompoundExpr::conditional(e), Rational(1));
  return check_coherence(make_assessment(space, items)).coherent;
}

// A p-consistent family p-entails the conclusion when the all-ones assessment
// forces the conclusion's probability to one.
inline bool p_entails(const std::shared_ptr<const EventSpace>& space,
                      const std::vector<ConditionalEvent>& family, const ConditionalEvent& conclusion,
                      const ExtensionOptions& opts = {}) {
  if (!p_consistent(space, family)) throw NotPConsistent();
  std::vector<std::pair<CompoundExpr, Rational>> items;
  for (const auto& e : family) items.emplace_back(CompoundExpr::conditional(e), Rational(1));
  Assessment base = make_assessment(space, items);
  Interval iv = extension_interval(base, CompoundExpr::conditional(conclusion), {}, opts);
  return iv.lower == 1 && iv.upper == 1 && iv.lower_exact && iv.upper_exact;
}

}  // namespace crq
