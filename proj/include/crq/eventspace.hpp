#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crq/rational.hpp"

namespace crq {

struct UnknownAtom : std::runtime_error {
  explicit UnknownAtom(const std::string& name) : std::runtime_error("unknown atom: " + name) {}
};
struct EmptySpace : std::runtime_error {
  EmptySpace() : std::runtime_error("no constituent satisfies the impossibility constraints") {}
};
struct CapExceeded : std::runtime_error {
  CapExceeded(int n, int cap)
      : std::runtime_error("atom count " + std::to_string(n) + " exceeds cap " + std::to_string(cap)) {}
};
struct EmptyAntecedent : std::runtime_error {
  explicit EmptyAntecedent(const std::string& what = "conditioning event has no true constituent")
      : std::runtime_error(what) {}
};
struct SpaceMismatch : std::runtime_error {
  SpaceMismatch() : std::runtime_error("value tables belong to different event spaces") {}
};

// Propositional formula over named atoms. Immutable; nodes shared.
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  Formula() : node_(make(Kind::True, "", {})) {}

  static Formula constant(bool v) { return Formula(make(v ? Kind::True : Kind::False, "", {})); }
  static Formula atom(std::string name) { return Formula(make(Kind::Atom, std::move(name), {})); }
  static Formula negate(Formula a) { return Formula(make(Kind::Not, "", {std::move(a)})); }
  static Formula conj(Formula a, Formula b) {
    return Formula(make(Kind::And, "", {std::move(a), std::move(b)}));
  }
  static Formula disj(Formula a, Formula b) {
    return Formula(make(Kind::Or, "", {std::move(a), std::move(b)}));
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->atom; }
  const Formula& child(size_t i) const { return node_->kids[i]; }
  size_t arity() const { return node_->kids.size(); }

  // Render with minimal parentheses ("not" > "and" > "or").
  std::string str() const { return print(0); }

 private:
  struct Node {
    Kind kind;
    std::string atom;
    std::vector<Formula> kids;
  };
  std::shared_ptr<const Node> node_;

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> make(Kind k, std::string a, std::vector<Formula> kids) {
    return std::make_shared<const Node>(Node{k, std::move(a), std::move(kids)});
  }

  std::string print(int parent_prec) const {
    auto wrap = [&](int prec, std::string s) {
      return prec < parent_prec ? "(" + std::move(s) + ")" : std::move(s);
    };
    switch (kind()) {
      case Kind::True: return "true";
      case Kind::False: return "false";
      case Kind::Atom: return atom_name();
      case Kind::Not: return "not " + child(0).print(3);
      // Right operands get one extra level so the left-associative parse
      // reproduces the tree shape exactly.
      case Kind::And: return wrap(2, child(0).print(2) + " and " + child(1).print(3));
      case Kind::Or: return wrap(1, child(0).print(1) + " or " + child(1).print(2));
    }
    return {};
  }
};

inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind() || a.arity() != b.arity()) return false;
  if (a.kind() == Formula::Kind::Atom && a.atom_name() != b.atom_name()) return false;
  for (size_t i = 0; i < a.arity(); ++i)
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  return true;
}

// A possible world: one truth assignment surviving the constraints.
// Bit k of `bits` holds the truth value of atom k.
struct Constituent {
  int id = 0;
  uint32_t bits = 0;
  bool value(int atom_index) const { return (bits >> atom_index) & 1u; }
};

// Subset of constituents, identified by dense ids.
class Mask {
 public:
  Mask() = default;
  explicit Mask(int size) : size_(size), w_((size + 63) / 64, 0) {}
  int size() const { return size_; }
  void set(int i, bool v = true) {
    if (v)
      w_[i >> 6] |= (uint64_t{1} << (i & 63));
    else
      w_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }
  int count() const {
    int c = 0;
    for (auto w : w_) c += __builtin_popcountll(w);
    return c;
  }
  Mask operator&(const Mask& o) const { return apply(o, [](uint64_t a, uint64_t b) { return a & b; }); }
  Mask operator|(const Mask& o) const { return apply(o, [](uint64_t a, uint64_t b) { return a | b; }); }
  Mask operator~() const {
    Mask r = *this;
    for (auto& w : r.w_) w = ~w;
    r.trim();
    return r;
  }
  // set difference
  Mask minus(const Mask& o) const { return apply(o, [](uint64_t a, uint64_t b) { return a & ~b; }); }
  bool subset_of(const Mask& o) const { return minus(o).none(); }
  friend bool operator==(const Mask& a, const Mask& b) { return a.size_ == b.size_ && a.w_ == b.w_; }
  friend bool operator<(const Mask& a, const Mask& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    return a.w_ < b.w_;
  }

 private:
  int size_ = 0;
  std::vector<uint64_t> w_;
  template <typename F>
  Mask apply(const Mask& o, F f) const {
    Mask r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = f(w_[i], o.w_[i]);
    return r;
  }
  void trim() {
    int rem = size_ & 63;
    if (rem && !w_.empty()) w_.back() &= (uint64_t{1} << rem) - 1;
  }
};

// Event algebra: named atoms, impossibility constraints, and the surviving
// constituents enumerated in a fixed order (all-true first, lexicographic by
// declared atom order with true < false).
class EventSpace {
 public:
  static constexpr int kDefaultAtomCap = 16;
  // Enumeration is a full truth-table scan; past this many atoms the dense
  // representation stops being sensible regardless of the configured cap.
  static constexpr int kHardAtomCeiling = 24;

  EventSpace(std::vector<std::string> atoms, std::vector<Formula> impossible = {},
             int atom_cap = kDefaultAtomCap)
      : atoms_(std::move(atoms)), impossible_(std::move(impossible)) {
    const int n = static_cast<int>(atoms_.size());
    if (n > atom_cap || n > kHardAtomCeiling) throw CapExceeded(n, std::min(atom_cap, kHardAtomCeiling));
    for (int i = 0; i < n; ++i) {
      if (!index_.emplace(atoms_[i], i).second)
        throw std::invalid_argument("duplicate atom: " + atoms_[i]);
    }
    const uint32_t total = uint32_t{1} << n;
    for (uint32_t a = 0; a < total; ++a) {
      uint32_t bits = 0;
      for (int j = 0; j < n; ++j)
        if (!((a >> (n - 1 - j)) & 1u)) bits |= (uint32_t{1} << j);
      Constituent c{static_cast<int>(constituents_.size()), bits};
      bool excluded = false;
      for (const auto& f : impossible_)
        if (eval_bits(f, bits)) {
          excluded = true;
          break;
        }
      if (!excluded) constituents_.push_back(c);
    }
    if (constituents_.empty()) throw EmptySpace();
  }

  static std::shared_ptr<const EventSpace> make(std::vector<std::string> atoms,
                                                std::vector<Formula> impossible = {},
                                                int atom_cap = kDefaultAtomCap) {
    return std::make_shared<const EventSpace>(std::move(atoms), std::move(impossible), atom_cap);
  }

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<Formula>& impossible() const { return impossible_; }
  int atom_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UnknownAtom(name);
    return it->second;
  }

  int size() const { return static_cast<int>(constituents_.size()); }
  const Constituent& constituent(int id) const { return constituents_[id]; }
  const std::vector<Constituent>& constituents() const { return constituents_; }

  bool evaluate(const Formula& f, const Constituent& c) const { return eval_bits(f, c.bits); }

  Mask mask_of(const Formula& f) const {
    Mask m(size());
    for (const auto& c : constituents_)
      if (eval_bits(f, c.bits)) m.set(c.id);
    return m;
  }

  bool is_empty(const Formula& f) const { return mask_of(f).none(); }

  bool implies(const Formula& f, const Formula& g) const {
    return mask_of(f).subset_of(mask_of(g));
  }

  // "A ~C" style label for reports.
  std::string label(int id) const {
    const Constituent& c = constituents_[id];
    std::string out;
    for (int j = 0; j < atom_count(); ++j) {
      if (j) out += " ";
      if (!c.value(j)) out += "~";
      out += atoms_[j];
    }
    return out;
  }

 private:
  std::vector<std::string> atoms_;
  std::vector<Formula> impossible_;
  std::map<std::string, int> index_;
  std::vector<Constituent> constituents_;

  bool eval_bits(const Formula& f, uint32_t bits) const {
    switch (f.kind()) {
      case Formula::Kind::True: return true;
      case Formula::Kind::False: return false;
      case Formula::Kind::Atom: return (bits >> atom_index(f.atom_name())) & 1u;
      case Formula::Kind::Not: return !eval_bits(f.child(0), bits);
      case Formula::Kind::And: return eval_bits(f.child(0), bits) && eval_bits(f.child(1), bits);
      case Formula::Kind::Or: return eval_bits(f.child(0), bits) || eval_bits(f.child(1), bits);
    }
    return false;
  }
};

// A conditional event: consequent|antecedent, antecedent required non-empty
// wherever a table is built from it.
struct ConditionalEvent {
  Formula consequent;
  Formula antecedent;

  ConditionalEvent(Formula cons, Formula ante)
      : consequent(std::move(cons)), antecedent(std::move(ante)) {}
  explicit ConditionalEvent(Formula unconditional)
      : consequent(std::move(unconditional)), antecedent(Formula::constant(true)) {}

  ConditionalEvent negated() const { return {Formula::negate(consequent), antecedent}; }

  std::string str() const {
    if (antecedent.kind() == Formula::Kind::True) return consequent.str();
    return consequent.str() + "|" + antecedent.str();
  }
};

// Goodman–Nguyen inclusion: A|H implies B|K iff AH implies BK and ~B K
// implies ~A H.
inline bool gn_includes(const ConditionalEvent& e1, const ConditionalEvent& e2,
                        const EventSpace& space) {
  Mask h = space.mask_of(e1.antecedent);
  Mask k = space.mask_of(e2.antecedent);
  if (h.none() || k.none()) throw EmptyAntecedent();
  Mask ah = space.mask_of(e1.consequent) & h;
  Mask bk = space.mask_of(e2.consequent) & k;
  Mask not_a_h = h.minus(ah);
  Mask not_b_k = k.minus(bk);
  return ah.subset_of(bk) && not_b_k.subset_of(not_a_h);
}

}  // namespace crq
