#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sugenn/capacity.hpp"
#include "sugenn/core.hpp"
#include "sugenn/network.hpp"

namespace sugenn {

enum class CheckMode { exhaustive, randomized };

/// Outcome of an equivalence sweep. The mismatch list caps at 16 entries but
/// mismatch_count stays exact; empty mismatches <=> pass.
struct EquivalenceReport {
  static constexpr std::size_t kMismatchCap = 16;

  struct Mismatch {
    std::string input;
    std::string expected;
    std::string got;
  };

  CheckMode mode = CheckMode::exhaustive;
  std::uint64_t inputs_checked = 0;
  std::uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;
  std::uint64_t seed = 0;  // randomized mode only

  bool pass() const { return mismatch_count == 0; }

  void add_mismatch(std::string input, std::string expected, std::string got) {
    ++mismatch_count;
    if (mismatches.size() < kMismatchCap)
      mismatches.push_back({std::move(input), std::move(expected), std::move(got)});
  }
};

/// Plain thresholded weighted sum, direct integer loop — the trust anchor.
struct ReferenceNeuronResult {
  long long sum = 0;
  int activation = 0;
};

ReferenceNeuronResult reference_neuron(const HiddenNeuron& neuron,
                                       const BipolarVector& xbar);

/// Plain bipolar layer-by-layer computation, no Sugeno machinery anywhere.
struct ReferenceForwardResult {
  ActivationTrace trace;
  std::vector<double> pre_logits;
};

ReferenceForwardResult reference_network(const Network& network,
                                         const BipolarVector& xbar);

/// Compares neuron_forward on the compiled neuron, the match-bit route, and
/// the reference loop on every input (exhaustive needs n <= 20) or on
/// `trials` seeded random inputs.
EquivalenceReport check_neuron_equivalence(const HiddenNeuron& neuron, CheckMode mode,
                                           std::uint64_t trials = 100000,
                                           std::uint64_t seed = 1);

/// Same check against a caller-supplied compiled form (corruption probes).
EquivalenceReport check_neuron_equivalence(const HiddenNeuron& neuron,
                                           const SugenoNeuron& compiled, CheckMode mode,
                                           std::uint64_t trials = 100000,
                                           std::uint64_t seed = 1);

/// Full-trace and pre-logit comparison between the compiled Sugeno path and
/// the reference path over seeded random inputs.
EquivalenceReport check_network_equivalence(const Network& network,
                                            std::uint64_t trials, std::uint64_t seed);
EquivalenceReport check_network_equivalence(const Network& network,
                                            const SugenoNetwork& compiled,
                                            std::uint64_t trials, std::uint64_t seed);

/// Exhaustive variant over all 2^n inputs; requires input width <= 20.
EquivalenceReport check_network_equivalence_exhaustive(const Network& network);
EquivalenceReport check_network_equivalence_exhaustive(const Network& network,
                                                       const SugenoNetwork& compiled);

/// Random explicit capacities (m <= 6): definition-level evaluation vs focal
/// formula vs mu(E(x)) on binary profiles, min-max bounds and monotonicity on
/// 0.25-grid profiles, conjugate involution.
EquivalenceReport check_sugeno_identities(std::uint64_t seed, std::uint64_t cases);

/// Uniform random sign vector from raw generator words.
BipolarVector random_bipolar(std::mt19937_64& rng, std::size_t n);

/// Random capacity on a 0.25 grid, made monotone by closure (max over
/// subsets) and normalized to mu(full) = 1. Valid by construction.
ExplicitCapacity random_explicit_capacity(std::mt19937_64& rng, std::size_t m);

}  // namespace sugenn
