#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sugenn/capacity.hpp"
#include "sugenn/core.hpp"
#include "sugenn/network.hpp"

namespace sugenn {

/// "If every literal of `focal` is active then the integral reaches `weight`."
struct SelectionRule {
  BitVec focal;
  double weight = 1.0;
};

/// "If every literal of `focal` is inactive then the integral is capped at
/// `bound`" — 0 for the {0,1} threshold capacities, i.e. the neuron is off.
struct EliminationRule {
  BitVec focal;
  double bound = 0.0;
};

/// Enumerations carry a hard limit but always report the exact total count;
/// `truncated` is set when the listing stopped at the limit.
struct SelectionRuleList {
  std::vector<SelectionRule> rules;
  std::uint64_t total_count = 0;
  bool truncated = false;
};

struct EliminationRuleList {
  std::vector<EliminationRule> rules;
  std::uint64_t total_count = 0;
  bool truncated = false;
};

/// Focal sets contained in the active input: each one a minimal sufficient
/// condition for the observed activation.
struct Explanation {
  std::vector<BitVec> fired;       // tau-subsets of E(x) intersect Lambda
  std::uint64_t fired_count = 0;   // exact C(match_count, tau)
  std::size_t match_count = 0;
  int tau = 0;
  bool truncated = false;
};

/// Minimal set of bipolar coordinates to flip to reach the target activation.
struct Counterfactual {
  int target = 0;
  std::size_t flip_count = 0;
  std::vector<std::size_t> witness;  // 0-based coordinates, lexicographically smallest
  std::uint64_t minimal_witness_count = 0;
};

/// One selection rule per focal set, lexicographic, truncated at `limit`.
SelectionRuleList selection_rules(const FocalFamily& fam, std::uint64_t limit);

/// Elimination rules from the conjugate capacity: the (n - tau + 1)-subsets
/// of Lambda; deactivating all literals of any one of them kills the neuron.
EliminationRuleList elimination_rules(const ThresholdCapacity& mu, std::uint64_t limit);

/// Requires an activated threshold neuron; throws not_activated otherwise.
Explanation explain_activation(const SugenoNeuron& neuron, const BipolarVector& xbar,
                               std::uint64_t limit);

/// Smallest flip set moving the match count across tau. Witness flips the
/// lexicographically first mismatched (target 1) or matched (target 0)
/// coordinates. Constant neurons admit no change: impossible_target.
Counterfactual counterfactual(const SugenoNeuron& neuron, const BipolarVector& xbar,
                              int target);

/// "IF x1=+1 AND x3=-1 THEN activate"
std::string rule_text(const SelectionRule& rule);

/// "IF x1=-1 AND x3=+1 THEN deactivate" — conditions negate the stored
/// literals, since the rule fires when they are inactive.
std::string rule_text(const EliminationRule& rule);

}  // namespace sugenn
