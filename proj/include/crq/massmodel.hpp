#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "crq/compound.hpp"
#include "crq/quantity.hpp"

namespace crq {

// A full probability mass over the constituents. Conditional probabilities
// and compound previsions derived from one are coherent by construction,
// which makes this the sampling backbone for randomized checks.
class MassModel {
 public:
  MassModel(std::shared_ptr<const EventSpace> space, std::vector<Rational> mass)
      : space_(std::move(space)), mass_(std::move(mass)) {
    if (static_cast<int>(mass_.size()) != space_->size())
      throw InvalidMass("mass must assign a value to every constituent");
    Rational sum = 0;
    for (const auto& m : mass_) {
      if (m < 0) throw InvalidMass("mass values must be nonnegative");
      sum += m;
    }
    if (sum != 1) throw InvalidMass("mass must sum to one");
  }

  const std::shared_ptr<const EventSpace>& space() const { return space_; }
  const std::vector<Rational>& mass() const { return mass_; }

  Rational prob(const Formula& f) const {
    Mask m = space_->mask_of(f);
    Rational out = 0;
    for (int id = 0; id < space_->size(); ++id)
      if (m.test(id)) out += mass_[id];
    return out;
  }

  // P(E|H) = P(EH)/P(H); requires P(H) > 0.
  Rational cond_prob(const ConditionalEvent& e) const {
    Rational ph = prob(e.antecedent);
    if (ph == 0) throw std::domain_error("conditioning event " + e.antecedent.str() +
                                         " has zero probability under this mass");
    return prob(Formula::conj(e.consequent, e.antecedent)) / ph;
  }

  // Expected value of a table restricted to its conditioning event. This is
  // the unique coherent prevision of the quantity under this mass when the
  // conditioning carries positive probability.
  Rational conditional_prevision(const ValueTable& t) const {
    Rational num = 0, den = 0;
    for (int id = 0; id < space_->size(); ++id) {
      if (!t.conditioning().test(id)) continue;
      num += mass_[id] * t.value(id);
      den += mass_[id];
    }
    if (den == 0)
      throw std::domain_error("conditioning event has zero probability under this mass");
    return num / den;
  }

  // Fills ctx with the coherent previsions of every sub-conjunction of
  // `events` (sizes ascending) and returns the full conjunction's prevision.
  Rational fill_conjunction(const std::vector<ConditionalEvent>& events,
                            AssessmentContext& ctx) const {
    if (events.empty()) throw std::invalid_argument("empty conjunction");
    const size_t n = events.size();
    Rational last = 0;
    for (size_t size = 1; size <= n; ++size) {
      for (uint32_t bits = 1; bits < (uint32_t{1} << n); ++bits) {
        if (static_cast<size_t>(__builtin_popcount(bits)) != size) continue;
        std::vector<ConditionalEvent> sub;
        for (size_t i = 0; i < n; ++i)
          if ((bits >> i) & 1u) sub.push_back(events[i]);
        CtxKey key = conjunction_key(*space_, sub);
        if (ctx.get(key)) {
          if (bits + 1 == (uint32_t{1} << n) && size == n) last = *ctx.get(key);
          continue;
        }
        Rational z;
        if (size == 1) {
          z = cond_prob(sub[0]);
        } else {
          // Bootstrap: the all-void rows carry the value being computed and
          // they sit outside the conditioning, so a placeholder is harmless.
          ctx.set(key, Rational(0));
          ValueTable t = conjunction_n(space_, sub, ctx, BuildMode::Unchecked);
          z = conditional_prevision(t);
        }
        ctx.set(key, z);
        if (size == n) last = z;
      }
    }
    return last;
  }

  // Coherent prevision of target|(conjunction of antecedent) under this mass:
  // the ratio of the extended conjunction's prevision to the antecedent's.
  // Requires the antecedent conjunction's prevision to be positive.
  Rational fill_iterated(const ConditionalEvent& target,
                         const std::vector<ConditionalEvent>& antecedent,
                         AssessmentContext& ctx) const {
    CtxKey key = iterated_key(*space_, target, antecedent);
    if (auto v = ctx.get(key)) return *v;
    Rational zn = fill_conjunction(antecedent, ctx);
    std::vector<ConditionalEvent> all = antecedent;
    all.push_back(target);
    Rational zn1 = fill_conjunction(all, ctx);
    if (zn == 0)
      throw std::domain_error("antecedent conjunction has zero prevision under this mass");
    Rational mu = zn1 / zn;
    ctx.set(key, mu);
    return mu;
  }

 private:
  std::shared_ptr<const EventSpace> space_;
  std::vector<Rational> mass_;
};

}  // namespace crq
