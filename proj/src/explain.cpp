#include "sugenn/explain.hpp"

#include <algorithm>

namespace sugenn {

SelectionRuleList selection_rules(const FocalFamily& fam, std::uint64_t limit) {
  SelectionRuleList out;
  out.total_count = fam.count();
  out.truncated = out.total_count > limit;
  out.rules.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(limit, out.total_count)));
  fam.for_each([&](const BitVec& set, double weight) {
    if (out.rules.size() >= limit) return false;
    out.rules.push_back({set, weight});
    return true;
  });
  return out;
}

EliminationRuleList elimination_rules(const ThresholdCapacity& mu, std::uint64_t limit) {
  const ThresholdCapacity conj = conjugate(mu);
  const FocalFamily fam = focal_family(conj);
  EliminationRuleList out;
  out.total_count = fam.count();
  out.truncated = out.total_count > limit;
  out.rules.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(limit, out.total_count)));
  // The conjugate is again {0,1}-valued, so the rule bound 1 - mu^c_#(A) is 0:
  // the qualitative reading is plain deactivation.
  fam.for_each([&](const BitVec& set, double weight) {
    if (out.rules.size() >= limit) return false;
    out.rules.push_back({set, 1.0 - weight});
    return true;
  });
  return out;
}

Explanation explain_activation(const SugenoNeuron& neuron, const BipolarVector& xbar,
                               std::uint64_t limit) {
  if (xbar.size() != neuron.input_dimension)
    throw dimension_error("explain_activation: input width mismatch");
  if (neuron.decision.is_constant())
    throw error("explain_activation: constant neuron has no focal explanation");
  const PolarizedVector x = polarize(xbar);
  const BitVec matched = x.bits() & neuron.lambda.members();
  const std::size_t m = matched.count();
  const int tau = neuron.decision.tau;
  if (m < static_cast<std::size_t>(tau))
    throw not_activated("explain_activation: neuron did not activate (matches " +
                        std::to_string(m) + " < tau " + std::to_string(tau) + ")");
  Explanation out;
  out.match_count = m;
  out.tau = tau;
  out.fired_count = binomial(m, static_cast<std::uint64_t>(tau));
  out.truncated = out.fired_count > limit;
  const auto positions = matched.indices();
  for_each_combination(positions, static_cast<std::size_t>(tau),
                       [&](std::span<const std::size_t> combo) {
                         if (out.fired.size() >= limit) return false;
                         out.fired.push_back(
                             BitVec::from_indices(2 * neuron.input_dimension, combo));
                         return true;
                       });
  return out;
}

Counterfactual counterfactual(const SugenoNeuron& neuron, const BipolarVector& xbar,
                              int target) {
  if (xbar.size() != neuron.input_dimension)
    throw dimension_error("counterfactual: input width mismatch");
  if (target != 0 && target != 1)
    throw error("counterfactual: target must be 0 or 1");

  if (neuron.decision.is_constant()) {
    const int value =
        neuron.decision.kind == NeuronDecision::Kind::always_active ? 1 : 0;
    if (target != value)
      throw impossible_target("counterfactual: constant neuron cannot reach target " +
                              std::to_string(target));
    return {target, 0, {}, 1};
  }

  const std::size_t n = neuron.input_dimension;
  const PolarizedVector x = polarize(xbar);
  const BitVec matched_literals = x.bits() & neuron.lambda.members();
  const std::size_t m = matched_literals.count();
  const int tau = neuron.decision.tau;
  const int current = m >= static_cast<std::size_t>(tau) ? 1 : 0;
  if (target == current) return {target, 0, {}, 1};

  // Each flip of coordinate i toggles exactly one match bit, so the minimal
  // distance is how far the match count sits from the tau boundary.
  std::vector<std::size_t> pool;  // coordinates eligible to flip, ascending
  std::size_t need;
  std::uint64_t ways;
  if (target == 1) {
    need = static_cast<std::size_t>(tau) - m;
    ways = binomial(n - m, need);
    for (std::size_t i = 0; i < n; ++i)
      if (!matched_literals.test(x.plus(i) ? positive_literal(i) : negative_literal(i)))
        pool.push_back(i);
  } else {
    need = m - static_cast<std::size_t>(tau) + 1;
    ways = binomial(m, need);
    for (std::size_t i = 0; i < n; ++i)
      if (matched_literals.test(x.plus(i) ? positive_literal(i) : negative_literal(i)))
        pool.push_back(i);
  }
  pool.resize(need);
  return {target, need, std::move(pool), ways};
}

namespace {

std::string condition_text(const BitVec& literals, bool negate) {
  std::string s = "IF ";
  bool first = true;
  literals.for_each_set([&](std::size_t pos) {
    if (!first) s += " AND ";
    const bool positive = literal_is_positive(pos) != negate;
    s += "x" + std::to_string(literal_coordinate(pos) + 1) + (positive ? "=+1" : "=-1");
    first = false;
  });
  return s;
}

}  // namespace

std::string rule_text(const SelectionRule& rule) {
  return condition_text(rule.focal, false) + " THEN activate";
}

std::string rule_text(const EliminationRule& rule) {
  return condition_text(rule.focal, true) + " THEN deactivate";
}

}  // namespace sugenn
