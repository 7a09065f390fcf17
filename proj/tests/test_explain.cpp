#include <doctest.h>

#include <bit>
#include <random>

#include "sugenn/explain.hpp"
#include "sugenn/verify.hpp"
#include "test_util.hpp"

using namespace sugenn;
using namespace sugenn::testutil;

namespace {

SugenoNeuron example_neuron() { return compile_single(four_input_neuron()); }

BipolarVector bipolar_of_mask(std::uint64_t mask, std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? +1 : -1;
  return BipolarVector(v);
}

BipolarVector flip_coords(const BipolarVector& x, const std::vector<std::size_t>& coords) {
  std::vector<int> v = x.to_ints();
  for (std::size_t c : coords) v[c] = -v[c];
  return BipolarVector(v);
}

}  // namespace

TEST_CASE("selection_rules lists the paper's six rules in order") {
  const SugenoNeuron sn = example_neuron();
  const SelectionRuleList rules = selection_rules(focal_family(*sn.capacity), 100);
  REQUIRE(rules.total_count == 6);
  REQUIRE_FALSE(rules.truncated);
  const std::vector<std::string> expected{
      "IF x1=+1 AND x2=+1 THEN activate", "IF x1=+1 AND x3=-1 THEN activate",
      "IF x1=+1 AND x4=+1 THEN activate", "IF x2=+1 AND x3=-1 THEN activate",
      "IF x2=+1 AND x4=+1 THEN activate", "IF x3=-1 AND x4=+1 THEN activate",
  };
  for (std::size_t i = 0; i < 6; ++i) CHECK(rule_text(rules.rules[i]) == expected[i]);
}

TEST_CASE("selection_rules truncation keeps the exact count") {
  const SugenoNeuron sn = example_neuron();
  const SelectionRuleList rules = selection_rules(focal_family(*sn.capacity), 2);
  CHECK(rules.total_count == 6);
  CHECK(rules.truncated);
  REQUIRE(rules.rules.size() == 2);
  CHECK(rule_text(rules.rules[0]) == "IF x1=+1 AND x2=+1 THEN activate");
}

TEST_CASE("selection_rules with tau = n requires every matched literal") {
  const SugenoNeuron sn = compile_single({BipolarVector({+1, -1, +1}), 3.0});
  REQUIRE(sn.decision.tau == 3);
  const SelectionRuleList rules = selection_rules(focal_family(*sn.capacity), 10);
  REQUIRE(rules.total_count == 1);
  CHECK(rule_text(rules.rules[0]) == "IF x1=+1 AND x2=-1 AND x3=+1 THEN activate");
}

TEST_CASE("selection_rules over a weighted-threshold focal family") {
  const WeightedThresholdCapacity mu({3.0, 2.0, 1.0}, 4.0);
  std::vector<FocalFamily::Element> elements;
  for (const auto& f : mu.focal_sets()) elements.push_back({f, 1.0});
  const SelectionRuleList rules =
      selection_rules(FocalFamily::explicit_family(3, std::move(elements)), 10);
  REQUIRE(rules.total_count == 2);
  CHECK(rules.rules[0].focal == BitVec::from_indices(3, {0, 1}));
  CHECK(rules.rules[1].focal == BitVec::from_indices(3, {0, 2}));
}

TEST_CASE("elimination_rules") {
  SUBCASE("paper example: the four 3-subsets of Lambda") {
    // brute force: any 3 mismatches leave at most 1 match < tau=2
    const SugenoNeuron sn = example_neuron();
    const EliminationRuleList rules = elimination_rules(*sn.capacity, 100);
    REQUIRE(rules.total_count == 4);
    for (const auto& r : rules.rules) {
      CHECK(r.focal.count() == 3);
      CHECK(r.focal.is_subset_of(sn.lambda.members()));
      CHECK(r.bound == 0.0);
    }
    CHECK(rule_text(rules.rules[0]) ==
          "IF x1=-1 AND x2=-1 AND x3=+1 THEN deactivate");
  }
  SUBCASE("tau = 1: only the total mismatch deactivates") {
    const SugenoNeuron sn = compile_single({BipolarVector({+1, -1, +1}), -2.0});
    REQUIRE(sn.decision.tau == 1);
    const EliminationRuleList rules = elimination_rules(*sn.capacity, 10);
    REQUIRE(rules.total_count == 1);
    CHECK(rules.rules[0].focal == sn.lambda.members());
  }
  SUBCASE("n=3, tau=2 against the exhaustive truth table") {
    const SugenoNeuron sn = compile_single({BipolarVector({+1, +1, -1}), 0.5});
    REQUIRE(sn.decision.tau == 2);
    const EliminationRuleList rules = elimination_rules(*sn.capacity, 10);
    CHECK(rules.total_count == binomial(3, 2));
    // every input deactivating all literals of some rule set must be off
    for (std::uint64_t mask = 0; mask < 8; ++mask) {
      const BipolarVector x = bipolar_of_mask(mask, 3);
      const PolarizedVector px = polarize(x);
      bool covered = false;
      for (const auto& r : rules.rules)
        if (intersection_count(r.focal, px.bits()) == 0) covered = true;
      const int active = neuron_forward(sn, px);
      REQUIRE(covered == (active == 0));
    }
  }
}

TEST_CASE("explain_activation") {
  const SugenoNeuron sn = example_neuron();
  SUBCASE("flipped paper sample fires exactly {1+,2+}") {
    const Explanation e = explain_activation(sn, four_input_sample_flipped(), 10);
    CHECK(e.match_count == 2);
    CHECK(e.tau == 2);
    REQUIRE(e.fired_count == 1);
    CHECK(e.fired[0] == BitVec::from_indices(8, {0, 2}));
  }
  SUBCASE("full agreement fires all six rules") {
    const Explanation e = explain_activation(sn, four_input_neuron().weights, 10);
    CHECK(e.fired_count == 6);
    CHECK(e.fired.size() == 6);
  }
  SUBCASE("non-activating input is an error") {
    CHECK_THROWS_AS(explain_activation(sn, four_input_sample(), 10), not_activated);
  }
  SUBCASE("truncation keeps the count exact") {
    const Explanation e = explain_activation(sn, four_input_neuron().weights, 2);
    CHECK(e.fired_count == 6);
    CHECK(e.truncated);
    CHECK(e.fired.size() == 2);
  }
  SUBCASE("constant neurons have no focal explanation") {
    const SugenoNeuron constant = compile_single({BipolarVector({+1, +1}), -9.0});
    CHECK_THROWS_AS(explain_activation(constant, BipolarVector({+1, -1}), 10), error);
  }
  SUBCASE("every fired set is a tau-subset of the active matches") {
    std::mt19937_64 rng(211);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + rng() % 10;
      const HiddenNeuron neuron = random_neuron(rng, n);
      const SugenoNeuron sn2 = compile_single(neuron);
      if (sn2.decision.is_constant()) continue;
      const BipolarVector x = random_bipolar(rng, n);
      const PolarizedVector px = polarize(x);
      if (neuron_forward(sn2, px) != 1) continue;
      const Explanation e = explain_activation(sn2, x, 1000);
      REQUIRE(e.fired_count == binomial(e.match_count, e.tau));
      for (const auto& fired : e.fired) {
        REQUIRE(fired.count() == static_cast<std::size_t>(e.tau));
        REQUIRE(fired.is_subset_of(px.bits()));
        REQUIRE(fired.is_subset_of(sn2.lambda.members()));
        // the fired set alone is sufficient: mu(A) = 1
        REQUIRE(sn2.capacity->value(fired) == 1);
      }
    }
  }
}

TEST_CASE("counterfactual") {
  const SugenoNeuron sn = example_neuron();
  SUBCASE("paper sample: flip x2 to activate") {
    const Counterfactual cf = counterfactual(sn, four_input_sample(), 1);
    CHECK(cf.flip_count == 1);
    CHECK(cf.witness == std::vector<std::size_t>{1});  // coordinate 2, 0-based 1
    CHECK(cf.minimal_witness_count == 3);              // C(4-1, 2-1)
    // applying the witness reaches the target
    CHECK(neuron_forward(sn, polarize(flip_coords(four_input_sample(), cf.witness))) == 1);
  }
  SUBCASE("target already met") {
    const Counterfactual cf = counterfactual(sn, four_input_sample(), 0);
    CHECK(cf.flip_count == 0);
    CHECK(cf.witness.empty());
  }
  SUBCASE("deactivation direction") {
    // flipped sample has M = 2 = tau; one matched flip drops it below
    const Counterfactual cf = counterfactual(sn, four_input_sample_flipped(), 0);
    CHECK(cf.flip_count == 1);
    CHECK(cf.minimal_witness_count == 2);  // C(2, 1)
    CHECK(neuron_forward(
              sn, polarize(flip_coords(four_input_sample_flipped(), cf.witness))) == 0);
  }
  SUBCASE("constant neuron rejects the opposite target") {
    const SugenoNeuron constant = compile_single({BipolarVector({+1, +1}), -9.0});
    CHECK_THROWS_AS(counterfactual(constant, BipolarVector({-1, -1}), 0),
                    impossible_target);
    const Counterfactual cf = counterfactual(constant, BipolarVector({-1, -1}), 1);
    CHECK(cf.flip_count == 0);
  }
  SUBCASE("witness determinism") {
    const Counterfactual a = counterfactual(sn, four_input_sample(), 1);
    const Counterfactual b = counterfactual(sn, four_input_sample(), 1);
    CHECK(a.witness == b.witness);
  }
  SUBCASE("minimality against the exhaustive flip-set oracle") {
    std::mt19937_64 rng(223);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 1 + rng() % 10;
      const HiddenNeuron neuron = random_neuron(rng, n);
      const SugenoNeuron sn2 = compile_single(neuron);
      if (sn2.decision.is_constant()) continue;
      const BipolarVector x = random_bipolar(rng, n);
      const int current = neuron_forward(sn2, polarize(x));
      const int target = 1 - current;
      const Counterfactual cf = counterfactual(sn2, x, target);
      REQUIRE(cf.flip_count >= 1);
      // witness achieves the target
      REQUIRE(neuron_forward(sn2, polarize(flip_coords(x, cf.witness))) == target);
      // no strictly smaller flip set reaches it
      std::uint64_t smaller_hits = 0;
      std::uint64_t minimal_hits = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
        if (size > cf.flip_count) continue;
        std::vector<std::size_t> coords;
        for (std::size_t i = 0; i < n; ++i)
          if ((mask >> i) & 1) coords.push_back(i);
        const bool hits = neuron_forward(sn2, polarize(flip_coords(x, coords))) == target;
        if (size < cf.flip_count && hits) ++smaller_hits;
        if (size == cf.flip_count && hits) ++minimal_hits;
      }
      REQUIRE(smaller_hits == 0);
      REQUIRE(minimal_hits == cf.minimal_witness_count);
    }
  }
}

TEST_CASE("rule soundness and completeness, exhaustive") {
  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const HiddenNeuron neuron = random_neuron(rng, n);
    const SugenoNeuron sn = compile_single(neuron);
    if (sn.decision.is_constant()) continue;
    const SelectionRuleList sel = selection_rules(focal_family(*sn.capacity), 1u << 20);
    const EliminationRuleList elim = elimination_rules(*sn.capacity, 1u << 20);
    REQUIRE_FALSE(sel.truncated);
    REQUIRE_FALSE(elim.truncated);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const PolarizedVector px = polarize(bipolar_of_mask(mask, n));
      const bool active = neuron_forward(sn, px) == 1;
      bool sel_covered = false;
      for (const auto& r : sel.rules)
        if (r.focal.is_subset_of(px.bits())) {
          sel_covered = true;
          break;
        }
      bool elim_covered = false;
      for (const auto& r : elim.rules)
        if (intersection_count(r.focal, px.bits()) == 0) {
          elim_covered = true;
          break;
        }
      // soundness and completeness in both directions
      REQUIRE(sel_covered == active);
      REQUIRE(elim_covered == !active);
    }
  }
}
