#include "sugenn/network.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sugenn {

SugenoNetwork::SugenoNetwork(std::vector<std::vector<SugenoNeuron>> hidden,
                             std::vector<SugenoOutputUnit> output)
    : hidden_(std::move(hidden)), output_(std::move(output)) {
  if (hidden_.empty() || hidden_.front().empty())
    throw dimension_error("SugenoNetwork: at least one nonempty hidden layer required");
  if (output_.empty()) throw dimension_error("SugenoNetwork: output layer is empty");
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    const std::size_t fan_in = hidden_[l].front().input_dimension;
    for (const auto& neuron : hidden_[l])
      if (neuron.input_dimension != fan_in)
        throw dimension_error("SugenoNetwork: inconsistent widths in layer " +
                              std::to_string(l));
    if (l > 0 && fan_in != hidden_[l - 1].size())
      throw dimension_error("SugenoNetwork: width chain broken at layer " +
                            std::to_string(l));
  }
  for (const auto& unit : output_)
    if (unit.capacity.base_dimension() != hidden_.back().size())
      throw dimension_error("SugenoNetwork: output width mismatch");
}

namespace {

SugenoNeuron compile_neuron(const HiddenNeuron& neuron) {
  SugenoNeuron sn;
  sn.input_dimension = neuron.weights.size();
  sn.lambda = lambda_set(neuron.weights);
  sn.decision = decide_tau(neuron.theta, sn.input_dimension);
  if (sn.decision.kind == NeuronDecision::Kind::threshold)
    sn.capacity.emplace(sn.lambda, sn.decision.tau);
  return sn;
}

}  // namespace

SugenoNetwork compile(const Network& network) {
  std::vector<std::vector<SugenoNeuron>> hidden;
  hidden.reserve(network.hidden_layers().size());
  for (const auto& layer : network.hidden_layers()) {
    std::vector<SugenoNeuron> compiled;
    compiled.reserve(layer.size());
    for (const auto& neuron : layer) compiled.push_back(compile_neuron(neuron));
    hidden.push_back(std::move(compiled));
  }
  std::vector<SugenoOutputUnit> output;
  output.reserve(network.output_layer().size());
  for (const auto& unit : network.output_layer())
    output.push_back({NormalizedMatchCapacity(lambda_set(unit.weights)), unit.bias});
  return SugenoNetwork(std::move(hidden), std::move(output));
}

int neuron_forward(const SugenoNeuron& neuron, const PolarizedVector& x) {
  if (x.base_dimension() != neuron.input_dimension)
    throw dimension_error("neuron_forward: input width mismatch");
  switch (neuron.decision.kind) {
    case NeuronDecision::Kind::always_active: return 1;
    case NeuronDecision::Kind::never_active: return 0;
    case NeuronDecision::Kind::threshold: return sugeno_eval_binary(*neuron.capacity, x);
  }
  return 0;
}

int neuron_forward_matchbit(const HiddenNeuron& neuron, const BipolarVector& xbar) {
  if (xbar.size() != neuron.weights.size())
    throw dimension_error("neuron_forward_matchbit: length mismatch");
  const NeuronDecision decision = decide_tau(neuron.theta, neuron.weights.size());
  if (decision.kind == NeuronDecision::Kind::always_active) return 1;
  if (decision.kind == NeuronDecision::Kind::never_active) return 0;
  const BitVec z = match_bits(xbar, neuron.weights);
  const CardinalityCapacity mu_tau(neuron.weights.size(), decision.tau);
  return sugeno_eval_binary(mu_tau, z);
}

PolarizedVector layer_forward(std::span<const SugenoNeuron> layer,
                              const PolarizedVector& x) {
  std::vector<std::uint8_t> y(layer.size());
  for (std::size_t j = 0; j < layer.size(); ++j)
    y[j] = static_cast<std::uint8_t>(neuron_forward(layer[j], x));
  return PolarizedVector::from_activations(y);
}

OutputScore output_score(const NormalizedMatchCapacity& cap, double bias,
                         const PolarizedVector& x) {
  if (x.base_dimension() != cap.base_dimension())
    throw dimension_error("output_score: input width mismatch");
  const Rational s = sugeno_eval_binary(cap, x);
  // 2n * (k/n) - n + bias, with the integer part formed before the one real add
  const double pre_logit = static_cast<double>(2 * s.num - s.den) + bias;
  return {s, pre_logit};
}

ClassScores class_distributions(std::span<const double> pre_logits) {
  if (pre_logits.empty())
    throw dimension_error("class_distributions: no classes");
  for (double s : pre_logits)
    if (!std::isfinite(s)) throw error("class_distributions: non-finite score");

  ClassScores out;
  out.pre_logits.assign(pre_logits.begin(), pre_logits.end());
  const std::size_t argmax = static_cast<std::size_t>(
      std::max_element(pre_logits.begin(), pre_logits.end()) - pre_logits.begin());
  const double shift = pre_logits[argmax];

  out.possibilities.resize(pre_logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < pre_logits.size(); ++k) {
    out.possibilities[k] = std::exp(pre_logits[k] - shift);
    total += out.possibilities[k];
  }
  out.probabilities.resize(pre_logits.size());
  for (std::size_t k = 0; k < pre_logits.size(); ++k)
    out.probabilities[k] = out.possibilities[k] / total;
  out.argmax = argmax;
  return out;
}

ForwardResult network_forward(const SugenoNetwork& net, const BipolarVector& xbar,
                              bool with_trace) {
  if (xbar.size() != net.input_width())
    throw dimension_error("network_forward: input width " + std::to_string(xbar.size()) +
                          ", network expects " + std::to_string(net.input_width()));
  ForwardResult result;
  PolarizedVector x = polarize(xbar);
  for (const auto& layer : net.hidden_layers()) {
    x = layer_forward(layer, x);
    if (with_trace) {
      std::vector<std::uint8_t> y(layer.size());
      for (std::size_t j = 0; j < layer.size(); ++j)
        y[j] = static_cast<std::uint8_t>(x.plus(j));
      result.trace.push_back(std::move(y));
    }
  }
  std::vector<double> pre_logits;
  std::vector<Rational> sugeno;
  pre_logits.reserve(net.class_count());
  sugeno.reserve(net.class_count());
  for (const auto& unit : net.output_layer()) {
    const OutputScore s = output_score(unit.capacity, unit.bias, x);
    pre_logits.push_back(s.pre_logit);
    sugeno.push_back(s.sugeno);
  }
  result.scores = class_distributions(pre_logits);
  result.scores.sugeno_scores = std::move(sugeno);
  return result;
}

}  // namespace sugenn
