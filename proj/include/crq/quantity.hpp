#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crq/eventspace.hpp"
#include "crq/rational.hpp"

namespace crq {

struct OutOfRangeAssessment : std::runtime_error {
  explicit OutOfRangeAssessment(const std::string& what) : std::runtime_error(what) {}
};
struct MissingValue : std::runtime_error {
  explicit MissingValue(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidMass : std::runtime_error {
  explicit InvalidMass(const std::string& what) : std::runtime_error(what) {}
};
struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct MissingAssessment : std::runtime_error {
  std::vector<std::string> missing;
  explicit MissingAssessment(std::vector<std::string> keys)
      : std::runtime_error(describe(keys)), missing(std::move(keys)) {}
  static std::string describe(const std::vector<std::string>& keys) {
    std::string out = "missing assessed previsions for:";
    for (const auto& k : keys) out += " [" + k + "]";
    return out;
  }
};
struct DegenerateAntecedent : std::runtime_error {
  explicit DegenerateAntecedent(const std::string& what) : std::runtime_error(what) {}
};
struct InconsistentContext : std::runtime_error {
  explicit InconsistentContext(const std::string& what) : std::runtime_error(what) {}
};

// Checked validates ranges and the structural identities a coherent context
// must satisfy; Unchecked builds tables verbatim so the coherence checker can
// examine assessments it is about to reject.
enum class BuildMode { Checked, Unchecked };

// A conditional random quantity as an exact value table: one rational per
// constituent. Constituents outside the conditioning event carry the assessed
// prevision, so downstream algebra never needs a void marker.
class ValueTable {
 public:
  ValueTable(std::shared_ptr<const EventSpace> space, Mask conditioning,
             std::vector<Rational> values)
      : space_(std::move(space)), conditioning_(std::move(conditioning)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != space_->size())
      throw std::invalid_argument("value table must cover every constituent");
    if (conditioning_.none()) throw EmptyAntecedent();
  }

  const EventSpace& space() const { return *space_; }
  const std::shared_ptr<const EventSpace>& space_ptr() const { return space_; }
  const Mask& conditioning() const { return conditioning_; }
  const Rational& value(int id) const { return values_[id]; }
  const std::vector<Rational>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  bool same_space(const ValueTable& o) const { return space_ == o.space_; }

  friend bool operator==(const ValueTable& a, const ValueTable& b) {
    return a.space_ == b.space_ && a.conditioning_ == b.conditioning_ && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const EventSpace> space_;
  Mask conditioning_;
  std::vector<Rational> values_;
};

// Indicator of A|H: 1 on AH, 0 on ~A H, x on ~H. In checked mode the third
// value is forced to the unique coherent one when AH = H or AH is empty.
inline ValueTable indicator(const std::shared_ptr<const EventSpace>& space,
                            const ConditionalEvent& e, Rational x,
                            BuildMode mode = BuildMode::Checked) {
  Mask h = space->mask_of(e.antecedent);
  if (h.none()) throw EmptyAntecedent("empty antecedent in " + e.str());
  Mask truth = space->mask_of(e.consequent) & h;
  if (mode == BuildMode::Checked) {
    if (!is_probability(x))
      throw OutOfRangeAssessment("assessment on " + e.str() + " outside [0,1]: " + to_string(x));
    if (truth == h) x = 1;
    if (truth.none()) x = 0;
  }
  std::vector<Rational> v(space->size(), x);
  for (int id = 0; id < space->size(); ++id) {
    if (truth.test(id))
      v[id] = 1;
    else if (h.test(id))
      v[id] = 0;
  }
  return ValueTable(space, h, std::move(v));
}

// X|H = XH + mu ~H for an explicit finite X given on the H-constituents.
inline ValueTable make_crq(const std::shared_ptr<const EventSpace>& space,
                           const std::map<int, Rational>& values_on_h, const Formula& h,
                           Rational mu) {
  Mask hm = space->mask_of(h);
  if (hm.none()) throw EmptyAntecedent("empty conditioning event " + h.str());
  std::vector<Rational> v(space->size(), mu);
  for (int id = 0; id < space->size(); ++id) {
    if (!hm.test(id)) continue;
    auto it = values_on_h.find(id);
    if (it == values_on_h.end())
      throw MissingValue("no value supplied for constituent " + space->label(id));
    v[id] = it->second;
  }
  return ValueTable(space, hm, std::move(v));
}

namespace detail {
inline void require_same_space(const ValueTable& a, const ValueTable& b) {
  if (!a.same_space(b)) throw SpaceMismatch();
}
}  // namespace detail

inline ValueTable pw_add(const ValueTable& a, const ValueTable& b,
                         std::optional<Mask> conditioning = std::nullopt) {
  detail::require_same_space(a, b);
  std::vector<Rational> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.value(i) + b.value(i);
  return ValueTable(a.space_ptr(), conditioning ? *conditioning : (a.conditioning() | b.conditioning()),
                    std::move(v));
}

inline ValueTable pw_sub(const ValueTable& a, const ValueTable& b,
                         std::optional<Mask> conditioning = std::nullopt) {
  detail::require_same_space(a, b);
  std::vector<Rational> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.value(i) - b.value(i);
  return ValueTable(a.space_ptr(), conditioning ? *conditioning : (a.conditioning() | b.conditioning()),
                    std::move(v));
}

inline ValueTable pw_mul(const ValueTable& a, const ValueTable& b,
                         std::optional<Mask> conditioning = std::nullopt) {
  detail::require_same_space(a, b);
  std::vector<Rational> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.value(i) * b.value(i);
  return ValueTable(a.space_ptr(), conditioning ? *conditioning : (a.conditioning() | b.conditioning()),
                    std::move(v));
}

inline ValueTable pw_scale(const ValueTable& a, const Rational& s) {
  std::vector<Rational> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.value(i) * s;
  return ValueTable(a.space_ptr(), a.conditioning(), std::move(v));
}

// Complement to one: the negation of a conditional or compound table.
inline ValueTable pw_complement(const ValueTable& a) {
  std::vector<Rational> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = Rational(1) - a.value(i);
  return ValueTable(a.space_ptr(), a.conditioning(), std::move(v));
}

inline Rational prevision_under_mass(const ValueTable& t, const std::vector<Rational>& mass) {
  if (static_cast<int>(mass.size()) != t.size())
    throw InvalidMass("mass must assign a value to every constituent");
  Rational sum = 0;
  for (const auto& m : mass) {
    if (m < 0) throw InvalidMass("mass values must be nonnegative");
    sum += m;
  }
  if (sum != 1) throw InvalidMass("mass must sum to one, got " + to_string(sum));
  Rational out = 0;
  for (int i = 0; i < t.size(); ++i) out += mass[i] * t.value(i);
  return out;
}

enum class Relation { Eq, Le };

// Compares two quantities where the disjunction of their conditionings holds.
inline bool compare_on_disjunction(const ValueTable& a, const ValueTable& b, Relation rel) {
  detail::require_same_space(a, b);
  Mask scope = a.conditioning() | b.conditioning();
  for (int i = 0; i < a.size(); ++i) {
    if (!scope.test(i)) continue;
    if (rel == Relation::Eq ? (a.value(i) != b.value(i)) : (a.value(i) > b.value(i))) return false;
  }
  return true;
}

// --- assessment context -----------------------------------------------------

// Semantic signature of a conditional event: the set of constituents where it
// is true and where its antecedent holds. Logically equal formulas share keys.
struct CondKey {
  Mask truth;
  Mask scope;
  friend bool operator<(const CondKey& a, const CondKey& b) {
    if (a.truth < b.truth) return true;
    if (b.truth < a.truth) return false;
    return a.scope < b.scope;
  }
  friend bool operator==(const CondKey& a, const CondKey& b) {
    return a.truth == b.truth && a.scope == b.scope;
  }
};

// Canonical key for an assessed prevision: a sorted multiset of conditional
// signatures (a single conditional is the one-element case) or an iterated
// conditional target over such a multiset.
struct CtxKey {
  enum class Kind { Conjunction, Iterated };
  Kind kind = Kind::Conjunction;
  std::vector<CondKey> conj;    // sorted
  std::vector<CondKey> target;  // Iterated only, one element

  friend bool operator<(const CtxKey& a, const CtxKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.conj != b.conj) return a.conj < b.conj;
    return a.target < b.target;
  }
};

inline CondKey cond_key(const EventSpace& space, const ConditionalEvent& e) {
  Mask h = space.mask_of(e.antecedent);
  return CondKey{space.mask_of(e.consequent) & h, h};
}

inline CtxKey conditional_key(const EventSpace& space, const ConditionalEvent& e) {
  return CtxKey{CtxKey::Kind::Conjunction, {cond_key(space, e)}, {}};
}

inline CtxKey conjunction_key(const EventSpace& space, const std::vector<ConditionalEvent>& events) {
  CtxKey k;
  k.kind = CtxKey::Kind::Conjunction;
  for (const auto& e : events) k.conj.push_back(cond_key(space, e));
  std::sort(k.conj.begin(), k.conj.end());
  return k;
}

inline CtxKey iterated_key(const EventSpace& space, const ConditionalEvent& target,
                           const std::vector<ConditionalEvent>& antecedent) {
  CtxKey k = conjunction_key(space, antecedent);
  k.kind = CtxKey::Kind::Iterated;
  k.target = {cond_key(space, target)};
  return k;
}

// Assessed prevision values, keyed canonically so conjunction keys are
// permutation-invariant by construction.
class AssessmentContext {
 public:
  void set(const CtxKey& key, Rational value) { values_[key] = std::move(value); }

  std::optional<Rational> get(const CtxKey& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  // Single-conditional lookup falls back to one minus the complement's value.
  std::optional<Rational> conditional(const EventSpace& space, const ConditionalEvent& e) const {
    if (auto v = get(conditional_key(space, e))) return v;
    if (auto v = get(conditional_key(space, e.negated()))) return Rational(1) - *v;
    return std::nullopt;
  }

  bool empty() const { return values_.empty(); }
  size_t size() const { return values_.size(); }
  const std::map<CtxKey, Rational>& entries() const { return values_; }

 private:
  std::map<CtxKey, Rational> values_;
};

}  // namespace crq
