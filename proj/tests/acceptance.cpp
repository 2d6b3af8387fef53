// Acceptance suite: one pass/fail line per criterion, all values exact.
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crq/massmodel.hpp"
#include "crq/propagation.hpp"
#include "crq/replication.hpp"

using namespace crq;

namespace {

Formula fa(const char* n) { return Formula::atom(n); }

std::string rstr(const Rational& r) { return to_string(r); }

// ---------------------------------------------------------------------------
// Independent brute-force oracle: hull membership by exhaustive enumeration of
// basic solutions (Gaussian elimination only), plus the same zero-layer
// recursion done naively over the vertex list.
namespace oracle {

// Unique exact solution of A x = d for a column subset; nullopt when the
// columns are dependent or the system is inconsistent.
std::optional<std::vector<Rational>> solve_unique(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> d) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int rank = 0;
  std::vector<int> pivot_row_of_col(cols, -1);
  for (int c = 0; c < cols; ++c) {
    int pr = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) return std::nullopt;  // dependent columns
    std::swap(a[pr], a[rank]);
    std::swap(d[pr], d[rank]);
    Rational p = a[rank][c];
    for (int j = 0; j < cols; ++j) a[rank][j] /= p;
    d[rank] /= p;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (int j = 0; j < cols; ++j) a[r][j] -= f * a[rank][j];
      d[r] -= f * d[rank];
    }
    pivot_row_of_col[c] = rank;
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (d[r] != 0) return std::nullopt;  // inconsistent
  std::vector<Rational> x(cols);
  for (int c = 0; c < cols; ++c) x[c] = d[pivot_row_of_col[c]];
  return x;
}

// All basic feasible solutions of {B l = d, l >= 0}.
std::vector<std::vector<Rational>> vertices(const std::vector<std::vector<Rational>>& b,
                                            const std::vector<Rational>& d) {
  const int rows = static_cast<int>(b.size());
  const int cols = rows ? static_cast<int>(b[0].size()) : 0;
  std::vector<std::vector<Rational>> out;
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    if (!subset.empty()) {
      std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(subset.size()));
      for (int r = 0; r < rows; ++r)
        for (size_t k = 0; k < subset.size(); ++k) a[r][k] = b[r][subset[k]];
      if (auto x = solve_unique(a, d)) {
        bool nonneg = true;
        for (const auto& v : *x) nonneg = nonneg && v >= 0;
        if (nonneg) {
          std::vector<Rational> full(cols, Rational(0));
          for (size_t k = 0; k < subset.size(); ++k) full[subset[k]] = (*x)[k];
          out.push_back(std::move(full));
        }
      }
    }
    if (static_cast<int>(subset.size()) == rows) return;
    for (int c = start; c < cols; ++c) {
      subset.push_back(c);
      rec(c + 1);
      subset.pop_back();
    }
  };
  rec(0);
  return out;
}

bool coherent(const Assessment& a, std::vector<int> items) {
  for (;;) {
    Mask hn(a.space->size());
    for (int i : items) hn = hn | a.items[i].table.conditioning();
    std::vector<int> cons;
    for (int id = 0; id < a.space->size(); ++id)
      if (hn.test(id)) cons.push_back(id);
    const int n = static_cast<int>(items.size());
    std::vector<std::vector<Rational>> b(n + 1, std::vector<Rational>(cons.size()));
    std::vector<Rational> d(n + 1);
    for (int i = 0; i < n; ++i) {
      for (size_t h = 0; h < cons.size(); ++h) b[i][h] = a.items[items[i]].table.value(cons[h]);
      d[i] = a.items[items[i]].prevision;
    }
    for (size_t h = 0; h < cons.size(); ++h) b[n][h] = 1;
    d[n] = 1;
    auto verts = vertices(b, d);
    if (verts.empty()) return false;
    std::vector<int> zero_layer;
    for (int i = 0; i < n; ++i) {
      const Mask& hi = a.items[items[i]].table.conditioning();
      Rational best = 0;
      for (const auto& v : verts) {
        Rational massed = 0;
        for (size_t h = 0; h < cons.size(); ++h)
          if (hi.test(cons[h])) massed += v[h];
        if (massed > best) best = massed;
      }
      if (best == 0) zero_layer.push_back(items[i]);
    }
    if (zero_layer.empty()) return true;
    items = std::move(zero_layer);
  }
}

}  // namespace oracle

// ---------------------------------------------------------------------------

using Outcome = std::optional<std::string>;  // nullopt = pass

Outcome criterion_frechet_grid() {
  auto space = EventSpace::make({"A", "H", "B", "K"});
  ConditionalEvent a_h(fa("A"), fa("H")), b_k(fa("B"), fa("K"));
  for (int xi = 0; xi <= 8; ++xi)
    for (int yi = 0; yi <= 8; ++yi) {
      Rational x(xi, 8), y(yi, 8);
      Assessment base = make_assessment(space, {{CompoundExpr::conditional(a_h), x},
                                                {CompoundExpr::conditional(b_k), y}});
      Interval iv = extension_interval(base, CompoundExpr::conjunction({a_h, b_k}), {});
      Rational lo = std::max(Rational(x + y - 1), Rational(0));
      Rational hi = std::min(x, y);
      if (!(iv.lower == lo && iv.upper == hi && iv.lower_exact && iv.upper_exact))
        return "mismatch at (" + rstr(x) + "," + rstr(y) + "): got [" + rstr(iv.lower) + "," +
               rstr(iv.upper) + "] expected [" + rstr(lo) + "," + rstr(hi) + "]";
    }
  return std::nullopt;
}

Outcome criterion_iterated_family_grid() {
  auto space = EventSpace::make({"A", "H", "B", "K"});
  ConditionalEvent a_h(fa("A"), fa("H")), b_k(fa("B"), fa("K"));
  for (int xi = 0; xi <= 8; ++xi)
    for (int yi = 0; yi <= 8; ++yi)
      for (int zi = 0; zi <= 8; ++zi) {
        Rational x(xi, 8), y(yi, 8), z(zi, 8);
        std::vector<Rational> mus{Rational(0), Rational(1, 4), Rational(3, 4), Rational(1)};
        mus.push_back(x > 0 ? Rational(z / x) : Rational(1, 2));
        for (const Rational& mu : mus) {
          if (mu < 0 || mu > 1) continue;
          Assessment a = make_assessment(space, {{CompoundExpr::conditional(a_h), x},
                                                 {CompoundExpr::conditional(b_k), y},
                                                 {CompoundExpr::conjunction({a_h, b_k}), z},
                                                 {CompoundExpr::iterated(b_k, {a_h}), mu}});
          bool member;
          if (x > 0)
            member = z >= std::max(Rational(x + y - 1), Rational(0)) && z <= std::min(x, y) &&
                     mu * x == z;
          else
            member = z == 0;
          if (check_coherence(a).coherent != member)
            return "verdict mismatch at (" + rstr(x) + "," + rstr(y) + "," + rstr(z) + "," +
                   rstr(mu) + "): expected " + (member ? "coherent" : "incoherent");
        }
      }
  return std::nullopt;
}

Outcome criterion_ac_grid() {
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent just_c(fa("C")), c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  for (int xi = 0; xi <= 8; ++xi)
    for (int yi = 0; yi <= 8; ++yi) {
      Rational x(xi, 8), y(yi, 8);
      Assessment base = make_assessment(space, {{CompoundExpr::conditional(just_c), x},
                                                {CompoundExpr::conditional(c_given_a), y}});
      Interval iv = extension_interval(base, CompoundExpr::conditional(just_a), {});
      Interval want = ac_bounds(x, y);
      if (!(iv.lower == want.lower && iv.upper == want.upper && iv.lower_exact && iv.upper_exact))
        return "mismatch at (" + rstr(x) + "," + rstr(y) + "): got [" + rstr(iv.lower) + "," +
               rstr(iv.upper) + "] expected [" + rstr(want.lower) + "," + rstr(want.upper) + "]";
    }
  return std::nullopt;
}

Outcome criterion_self_consequent_grid() {
  auto space = EventSpace::make({"A", "C"});
  ConditionalEvent c_given_a(fa("C"), fa("A")), just_a(fa("A"));
  for (int xi = 0; xi <= 8; ++xi)
    for (int yi = 0; yi <= 8; ++yi) {
      Rational x(xi, 8), y(yi, 8);
      Assessment base = make_assessment(space, {{CompoundExpr::conditional(c_given_a), x},
                                                {CompoundExpr::conditional(just_a), y}});
      Interval iv = extension_interval(base, CompoundExpr::iterated(just_a, {c_given_a}), {});
      Rational want = x > 0 ? y : Rational(1);
      if (!(iv.lower == want && iv.upper == want))
        return "mismatch at (" + rstr(x) + "," + rstr(y) + "): got [" + rstr(iv.lower) + "," +
               rstr(iv.upper) + "] expected {" + rstr(want) + "}";
    }
  return std::nullopt;
}

Outcome criterion_strengthened_antecedents() {
  for (auto [name, fn] :
       {std::pair<const char*, CheckResult (*)(uint64_t, int)>{
            "event strengthening", replication::strengthened_antecedent_raises_belief},
        std::pair<const char*, CheckResult (*)(uint64_t, int)>{
            "conditional strengthening", replication::conditional_strengthening_disjunction}}) {
    CheckResult r = fn(20260811, 40);
    if (!r.pass) return std::string(name) + ": " + r.details;
  }
  return std::nullopt;
}

Outcome criterion_tables_and_negation() {
  for (CheckResult (*fn)(uint64_t, int) : {replication::iterated_event_three_regimes,
                                           replication::negation_complements_iterated_event,
                                           replication::self_consequent_boundary_cases,
                                           replication::sandwich_order_of_projections}) {
    CheckResult r = fn(818283, 100);
    if (!r.pass) return r.name + ": " + r.details;
  }
  return std::nullopt;
}

Outcome criterion_dutch_book() {
  std::mt19937_64 rng(424247);
  auto space = EventSpace::make({"A", "H", "B", "K"});
  ConditionalEvent a_h(fa("A"), fa("H")), b_k(fa("B"), fa("K"));
  auto ac_space = EventSpace::make({"A", "C"});
  ConditionalEvent just_c(fa("C")), c_given_a(fa("C"), fa("A")), just_a(fa("A"));

  // 100 incoherent assessments from the closed-form exteriors.
  for (int k = 0; k < 100; ++k) {
    Assessment bad{nullptr, {}};
    if (k % 2 == 0) {
      Rational x(rng() % 9, 8), y(rng() % 9, 8);
      Rational hi = std::min(x, y), lo = std::max(Rational(x + y - 1), Rational(0));
      Rational z;
      if (hi < 1 && (rng() & 1))
        z = hi + (Rational(1) - hi) * Rational(1 + rng() % 7, 8);
      else if (lo > 0)
        z = lo * Rational(rng() % 7, 8);
      else {
        --k;
        continue;
      }
      if (z > 1) z = 1;
      bad = make_assessment(space, {{CompoundExpr::conditional(a_h), x},
                                    {CompoundExpr::conditional(b_k), y},
                                    {CompoundExpr::conjunction({a_h, b_k}), z}});
    } else {
      Rational x(rng() % 9, 8), y(rng() % 9, 8);
      Rational hi = ac_bounds(x, y).upper;
      if (hi == 1) {
        --k;
        continue;
      }
      Rational z = hi + (Rational(1) - hi) * Rational(1 + rng() % 7, 8);
      bad = make_assessment(ac_space, {{CompoundExpr::conditional(just_c), x},
                                       {CompoundExpr::conditional(c_given_a), y},
                                       {CompoundExpr::conditional(just_a), z}});
    }
    auto w = dutch_book_witness(bad);
    if (!w) return "no witness for an exterior point (case " + std::to_string(k) + ")";
    bool pos = true, neg = true;
    for (int id = 0; id < bad.space->size(); ++id) {
      if (!w->hn.test(id)) continue;
      Rational g = 0;
      for (size_t i = 0; i < w->items.size(); ++i) {
        const auto& item = bad.items[w->items[i]];
        g += w->stakes[i] * (item.table.value(id) - item.prevision);
      }
      pos = pos && g > 0;
      neg = neg && g < 0;
    }
    if (!pos && !neg) return "witness gains not one-signed (case " + std::to_string(k) + ")";
  }

  // 100 coherent assessments, 1000 random stake vectors each.
  auto tri = EventSpace::make({"A", "B", "C"});
  ConditionalEvent e1(fa("C"), fa("A")), e2(fa("B"), fa("C")), e3(fa("A"), fa("B"));
  std::uniform_int_distribution<int> num(-32, 32), den(1, 16);
  for (int k = 0; k < 100; ++k) {
    MassModel m(tri, replication::positive_mass(rng, tri->size()));
    AssessmentContext ctx;
    Rational z = m.fill_conjunction({e1, e2}, ctx);
    Assessment a = make_assessment(tri, {{CompoundExpr::conditional(e1), m.cond_prob(e1)},
                                         {CompoundExpr::conditional(e2), m.cond_prob(e2)},
                                         {CompoundExpr::conditional(e3), m.cond_prob(e3)},
                                         {CompoundExpr::conjunction({e1, e2}), z}});
    Mask hn = build_sigma(a).hn;
    for (int t = 0; t < 1000; ++t) {
      std::vector<Rational> stakes;
      for (size_t i = 0; i < a.items.size(); ++i) stakes.emplace_back(num(rng), den(rng));
      bool nonpos = false, nonneg = false;
      for (int id = 0; id < tri->size() && !(nonpos && nonneg); ++id) {
        if (!hn.test(id)) continue;
        Rational g = gain(a, stakes, id);
        if (g <= 0) nonpos = true;
        if (g >= 0) nonneg = true;
      }
      if (!nonpos || !nonneg)
        return "uniformly one-signed gains against a coherent assessment (case " +
               std::to_string(k) + ")";
    }
  }
  return std::nullopt;
}

Outcome criterion_oracle_equivalence() {
  auto space = EventSpace::make({"A", "B", "C"});
  Formula a = fa("A"), b = fa("B"), c = fa("C");
  std::vector<ConditionalEvent> catalog{
      ConditionalEvent(a),
      ConditionalEvent(b),
      ConditionalEvent(a, b),
      ConditionalEvent(b, a),
      ConditionalEvent(c, Formula::conj(a, b)),
      ConditionalEvent(Formula::disj(a, b), c),
      ConditionalEvent(a, Formula::disj(b, c)),
      ConditionalEvent(Formula::negate(b), a),
  };
  const int n = static_cast<int>(catalog.size());
  long long checked = 0;
  auto compare = [&](const std::vector<int>& picks, const std::vector<Rational>& values) -> bool {
    std::vector<std::pair<CompoundExpr, Rational>> items;
    for (size_t i = 0; i < picks.size(); ++i)
      items.emplace_back(CompoundExpr::conditional(catalog[picks[i]]), values[i]);
    Assessment assess = make_assessment(space, items);
    std::vector<int> all(picks.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    ++checked;
    return check_coherence(assess).coherent == oracle::coherent(assess, all);
  };
  // Singles on the 1/8 grid.
  for (int i = 0; i < n; ++i)
    for (int v = 0; v <= 8; ++v)
      if (!compare({i}, {Rational(v, 8)})) return "single-item disagreement";
  // Pairs and triples on the 1/4 grid.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int v1 = 0; v1 <= 4; ++v1)
        for (int v2 = 0; v2 <= 4; ++v2)
          if (!compare({i, j}, {Rational(v1, 4), Rational(v2, 4)}))
            return "pair disagreement at items " + std::to_string(i) + "," + std::to_string(j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int v1 = 0; v1 <= 4; ++v1)
          for (int v2 = 0; v2 <= 4; ++v2)
            for (int v3 = 0; v3 <= 4; ++v3)
              if (!compare({i, j, k}, {Rational(v1, 4), Rational(v2, 4), Rational(v3, 4)}))
                return "triple disagreement at items " + std::to_string(i) + "," +
                       std::to_string(j) + "," + std::to_string(k) + " values " + rstr(Rational(v1, 4)) +
                       "," + rstr(Rational(v2, 4)) + "," + rstr(Rational(v3, 4));
  if (checked < 7000) return "enumeration unexpectedly small: " + std::to_string(checked);
  return std::nullopt;
}

Outcome criterion_import_export() {
  CheckResult r = replication::import_export_fails_without_triviality(5150, 100);
  if (!r.pass) return r.details;
  return std::nullopt;
}

Outcome criterion_uncorrelation() {
  CheckResult r = replication::uncorrelation_is_not_independence(6174, 24);
  if (!r.pass) return r.details;
  // The disjoint-antecedent product law through the propagation engine.
  Formula h = fa("H"), kf = fa("K");
  auto space = EventSpace::make({"A", "H", "B", "K"}, {Formula::conj(h, kf)});
  ConditionalEvent a_h(fa("A"), h), b_k(fa("B"), kf);
  for (auto [xi, yi] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{4, 1}}) {
    Rational x(xi, 4), y(yi, 4);
    Assessment base = make_assessment(space, {{CompoundExpr::conditional(a_h), x},
                                              {CompoundExpr::conditional(b_k), y}});
    Interval iv = extension_interval(base, CompoundExpr::conjunction({a_h, b_k}), {});
    if (!(iv.lower == x * y && iv.upper == x * y))
      return "product law through propagation failed at (" + rstr(x) + "," + rstr(y) + ")";
  }
  return std::nullopt;
}

}  // namespace

int main() {
  struct Criterion {
    std::string label;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"conjunction extension matches the product/minimum bounds on the 1/8 grid",
       criterion_frechet_grid},
      {"four-item iterated family matches its coherent set on the 1/8 grid",
       criterion_iterated_family_grid},
      {"consequent-affirmation extension matches the closed bounds, diagonal included",
       criterion_ac_grid},
      {"event-given-its-conditional prevision is the prior (one at probability zero)",
       criterion_self_consequent_grid},
      {"strengthened antecedents give the disjunction-conditioned values and dominate the priors",
       criterion_strengthened_antecedents},
      {"three-regime tables, sandwich order, and the negation sum-to-one law",
       criterion_tables_and_negation},
      {"Dutch-book witnesses are one-signed; coherent books never lose uniformly",
       criterion_dutch_book},
      {"checker agrees with the brute-force hull oracle over every small assessment",
       criterion_oracle_equivalence},
      {"conditional probability decomposes over iterates without collapsing to the prior",
       criterion_import_export},
      {"uncorrelation examples reproduce exactly, independence fails",
       criterion_uncorrelation},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = std::string("exception: ") + e.what();
    }
    if (out) {
      ++failures;
      std::cout << "FAIL  " << (i + 1) << ". " << criteria[i].label << "\n      " << *out << "\n";
    } else {
      std::cout << "PASS  " << (i + 1) << ". " << criteria[i].label << "\n";
    }
  }
  if (failures) {
    std::cout << failures << " of " << criteria.size() << " criteria FAILED\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed\n";
  return 0;
}
