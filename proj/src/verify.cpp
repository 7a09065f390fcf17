#include "sugenn/verify.hpp"

#include <algorithm>
#include <cmath>

namespace sugenn {

ReferenceNeuronResult reference_neuron(const HiddenNeuron& neuron,
                                       const BipolarVector& xbar) {
  if (neuron.weights.size() != xbar.size())
    throw dimension_error("reference_neuron: length mismatch");
  long long sum = 0;
  for (std::size_t i = 0; i < xbar.size(); ++i)
    sum += static_cast<long long>(neuron.weights[i]) * xbar[i];
  return {sum, static_cast<double>(sum) >= neuron.theta ? 1 : 0};
}

ReferenceForwardResult reference_network(const Network& network,
                                         const BipolarVector& xbar) {
  if (xbar.size() != network.input_width())
    throw dimension_error("reference_network: input width mismatch");
  ReferenceForwardResult out;
  std::vector<int> current = xbar.to_ints();
  for (const auto& layer : network.hidden_layers()) {
    std::vector<std::uint8_t> activations(layer.size());
    std::vector<int> next(layer.size());
    for (std::size_t j = 0; j < layer.size(); ++j) {
      long long sum = 0;
      for (std::size_t i = 0; i < current.size(); ++i)
        sum += static_cast<long long>(layer[j].weights[i]) * current[i];
      const int y = static_cast<double>(sum) >= layer[j].theta ? 1 : 0;
      activations[j] = static_cast<std::uint8_t>(y);
      next[j] = 2 * y - 1;
    }
    out.trace.push_back(std::move(activations));
    current = std::move(next);
  }
  out.pre_logits.reserve(network.class_count());
  for (const auto& unit : network.output_layer()) {
    long long sum = 0;
    for (std::size_t i = 0; i < current.size(); ++i)
      sum += static_cast<long long>(unit.weights[i]) * current[i];
    out.pre_logits.push_back(static_cast<double>(sum) + unit.bias);
  }
  return out;
}

BipolarVector random_bipolar(std::mt19937_64& rng, std::size_t n) {
  BitVec bits(n);
  for (std::size_t base = 0; base < n; base += 64) {
    const std::uint64_t word = rng();
    const std::size_t end = std::min(n, base + 64);
    for (std::size_t i = base; i < end; ++i)
      if ((word >> (i - base)) & 1) bits.set(i);
  }
  return BipolarVector::from_packed(std::move(bits));
}

ExplicitCapacity random_explicit_capacity(std::mt19937_64& rng, std::size_t m) {
  if (m == 0 || m > 20)
    throw ground_set_too_large("random_explicit_capacity: m outside [1,20]");
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> table(subsets);
  for (std::size_t mask = 1; mask + 1 < subsets; ++mask)
    table[mask] = 0.25 * static_cast<double>(rng() % 5);
  table[0] = 0.0;
  table[subsets - 1] = 1.0;
  // monotone closure: lift each value to the max over its subsets
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    std::uint32_t rest = mask;
    while (rest) {
      const std::uint32_t bit = rest & (~rest + 1);
      table[mask] = std::max(table[mask], table[mask ^ bit]);
      rest ^= bit;
    }
  }
  return ExplicitCapacity(m, std::move(table));
}

namespace {

BipolarVector bipolar_from_mask(std::uint64_t mask, std::size_t n) {
  BitVec bits(n);
  for (std::size_t i = 0; i < n; ++i)
    if ((mask >> i) & 1) bits.set(i);
  return BipolarVector::from_packed(std::move(bits));
}

void compare_neuron_paths(const HiddenNeuron& neuron, const SugenoNeuron& compiled,
                          const BipolarVector& x, EquivalenceReport& report) {
  const int ref = reference_neuron(neuron, x).activation;
  const int sugeno = neuron_forward(compiled, polarize(x));
  const int matchbit = neuron_forward_matchbit(neuron, x);
  ++report.inputs_checked;
  if (ref != sugeno || ref != matchbit)
    report.add_mismatch(x.to_string(), "reference=" + std::to_string(ref),
                        "sugeno=" + std::to_string(sugeno) +
                            ",matchbit=" + std::to_string(matchbit));
}

void compare_network_paths(const Network& network, const SugenoNetwork& compiled,
                           const BipolarVector& x, EquivalenceReport& report) {
  const ReferenceForwardResult ref = reference_network(network, x);
  const ForwardResult got = network_forward(compiled, x);
  ++report.inputs_checked;
  if (ref.trace != got.trace) {
    report.add_mismatch(x.to_string(), "reference trace", "diverging activation trace");
    return;
  }
  for (std::size_t k = 0; k < ref.pre_logits.size(); ++k) {
    if (ref.pre_logits[k] != got.scores.pre_logits[k]) {
      report.add_mismatch(x.to_string(),
                          "pre_logit[" + std::to_string(k) +
                              "]=" + std::to_string(ref.pre_logits[k]),
                          std::to_string(got.scores.pre_logits[k]));
      return;
    }
  }
}

}  // namespace

EquivalenceReport check_neuron_equivalence(const HiddenNeuron& neuron,
                                           const SugenoNeuron& compiled, CheckMode mode,
                                           std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = neuron.weights.size();
  EquivalenceReport report;
  report.mode = mode;
  if (mode == CheckMode::exhaustive) {
    if (n > 20)
      throw ground_set_too_large("check_neuron_equivalence: exhaustive mode needs n <= 20");
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask)
      compare_neuron_paths(neuron, compiled, bipolar_from_mask(mask, n), report);
  } else {
    report.seed = seed;
    std::mt19937_64 rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t)
      compare_neuron_paths(neuron, compiled, random_bipolar(rng, n), report);
  }
  return report;
}

EquivalenceReport check_neuron_equivalence(const HiddenNeuron& neuron, CheckMode mode,
                                           std::uint64_t trials, std::uint64_t seed) {
  const Network single({{neuron}}, {OutputNeuron{BipolarVector({1}), 0.0}});
  return check_neuron_equivalence(neuron, compile(single).hidden_layers()[0][0], mode,
                                  trials, seed);
}

EquivalenceReport check_network_equivalence(const Network& network,
                                            const SugenoNetwork& compiled,
                                            std::uint64_t trials, std::uint64_t seed) {
  EquivalenceReport report;
  report.mode = CheckMode::randomized;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t)
    compare_network_paths(network, compiled, random_bipolar(rng, network.input_width()),
                          report);
  return report;
}

EquivalenceReport check_network_equivalence(const Network& network, std::uint64_t trials,
                                            std::uint64_t seed) {
  return check_network_equivalence(network, compile(network), trials, seed);
}

EquivalenceReport check_network_equivalence_exhaustive(const Network& network,
                                                       const SugenoNetwork& compiled) {
  const std::size_t n = network.input_width();
  if (n > 20)
    throw ground_set_too_large(
        "check_network_equivalence_exhaustive: input width must be <= 20");
  EquivalenceReport report;
  report.mode = CheckMode::exhaustive;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask)
    compare_network_paths(network, compiled, bipolar_from_mask(mask, n), report);
  return report;
}

EquivalenceReport check_network_equivalence_exhaustive(const Network& network) {
  return check_network_equivalence_exhaustive(network, compile(network));
}

EquivalenceReport check_sugeno_identities(std::uint64_t seed, std::uint64_t cases) {
  if (cases < 1) throw error("check_sugeno_identities: cases must be >= 1");
  EquivalenceReport report;
  report.mode = CheckMode::randomized;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::uint64_t c = 0; c < cases; ++c) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % 6);
    const ExplicitCapacity mu = random_explicit_capacity(rng, m);
    const FocalFamily fam = mobius_transform(mu);
    const std::uint32_t full = mu.full_mask();

    // binary profiles: definition = focal formula = mu(active set)
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      std::vector<double> x(m, 0.0);
      BitVec active(m);
      for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1) {
          x[i] = 1.0;
          active.set(i);
        }
      const double general = sugeno_eval_general(mu, x);
      const double focal = sugeno_eval_focal(fam, x);
      const double direct = mu.value(mask);
      ++report.inputs_checked;
      if (general != focal || general != direct)
        report.add_mismatch("capacity " + std::to_string(c) + " mask " +
                                std::to_string(mask),
                            "mu(E(x))=" + std::to_string(direct),
                            "general=" + std::to_string(general) +
                                ",focal=" + std::to_string(focal));
    }

    // grid profiles: focal agreement, min-max bounds, monotone probes
    for (int probe = 0; probe < 8; ++probe) {
      std::vector<double> x(m), y(m);
      for (std::size_t i = 0; i < m; ++i) {
        x[i] = 0.25 * static_cast<double>(rng() % 5);
        y[i] = std::min(1.0, x[i] + 0.25 * static_cast<double>(rng() % 3));
      }
      const double sx = sugeno_eval_general(mu, x);
      const double sy = sugeno_eval_general(mu, y);
      const double fx = sugeno_eval_focal(fam, x);
      const double lo = *std::min_element(x.begin(), x.end());
      const double hi = *std::max_element(x.begin(), x.end());
      ++report.inputs_checked;
      if (fx != sx)
        report.add_mismatch("capacity " + std::to_string(c), "focal=" + std::to_string(sx),
                            std::to_string(fx));
      if (sx < lo || sx > hi)
        report.add_mismatch("capacity " + std::to_string(c),
                            "value within [min,max]", std::to_string(sx));
      if (sx > sy)
        report.add_mismatch("capacity " + std::to_string(c), "monotone evaluation",
                            std::to_string(sx) + " > " + std::to_string(sy));
    }

    // conjugate involution
    ++report.inputs_checked;
    if (conjugate(conjugate(mu)).table() != mu.table())
      report.add_mismatch("capacity " + std::to_string(c), "involution identity",
                          "conjugate(conjugate(mu)) != mu");
  }
  return report;
}

}  // namespace sugenn
