#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sugenn/capacity.hpp"
#include "sugenn/core.hpp"
#include "sugenn/rational.hpp"

namespace sugenn {

/// Hidden neuron in the set-function representation: a threshold capacity
/// over the input literals, or one of the two constant decisions.
struct SugenoNeuron {
  NeuronDecision decision;
  LiteralSet lambda;
  std::optional<ThresholdCapacity> capacity;  // present iff decision is threshold
  std::size_t input_dimension = 0;
};

/// Output unit: normalized-match capacity plus the affine bias.
struct SugenoOutputUnit {
  NormalizedMatchCapacity capacity;
  double bias = 0.0;
};

/// Compiled network: every hidden neuron as a Sugeno integral over a
/// threshold capacity, the output layer as normalized-match capacities.
/// Immutable after compile; evaluation is pure.
class SugenoNetwork {
 public:
  SugenoNetwork(std::vector<std::vector<SugenoNeuron>> hidden,
                std::vector<SugenoOutputUnit> output);

  const std::vector<std::vector<SugenoNeuron>>& hidden_layers() const { return hidden_; }
  const std::vector<SugenoOutputUnit>& output_layer() const { return output_; }

  std::size_t input_width() const { return hidden_.front().front().input_dimension; }
  std::size_t class_count() const { return output_.size(); }

 private:
  std::vector<std::vector<SugenoNeuron>> hidden_;
  std::vector<SugenoOutputUnit> output_;
};

/// Per-class scores: raw pre-logits, the underlying Sugeno values as exact
/// rationals, and the two normalized readings (softmax and possibility).
struct ClassScores {
  std::vector<double> pre_logits;
  std::vector<Rational> sugeno_scores;
  std::vector<double> probabilities;
  std::vector<double> possibilities;
  std::size_t argmax = 0;
};

/// All hidden activations of one forward pass, layer by layer.
using ActivationTrace = std::vector<std::vector<std::uint8_t>>;

struct ForwardResult {
  ClassScores scores;
  ActivationTrace trace;  // empty when tracing is disabled
};

/// Maps every hidden neuron through lambda_set + decide_tau and every output
/// unit onto its normalized-match capacity. Lossless for inference.
SugenoNetwork compile(const Network& network);

/// Activation in {0,1}: mu(E(x)) for threshold neurons, the fixed value for
/// constants. The bipolar output is 2*result - 1.
int neuron_forward(const SugenoNeuron& neuron, const PolarizedVector& x);

/// Match-bit route: activation = [sum z_i >= tau] through the cardinality
/// capacity on [n]. Agrees with neuron_forward on the compiled neuron.
int neuron_forward_matchbit(const HiddenNeuron& neuron, const BipolarVector& xbar);

/// Applies one layer and re-encodes the {0,1} outputs into the next polarized
/// input (y_j -> j+, 1-y_j -> j-).
PolarizedVector layer_forward(std::span<const SugenoNeuron> layer,
                              const PolarizedVector& x);

struct OutputScore {
  Rational sugeno;      // |E(x) intersect Lambda| / n, exact
  double pre_logit = 0.0;  // 2n * sugeno - n + bias
};

/// Last-layer score through the capacity: the affine rescaling recovers the
/// reference weighted sum plus bias exactly (integer part + one real add).
OutputScore output_score(const NormalizedMatchCapacity& cap, double bias,
                         const PolarizedVector& x);

/// Softmax probabilities and max-normalized possibilities from pre-logits.
/// The top class has possibility exactly 1. sugeno_scores is left empty.
ClassScores class_distributions(std::span<const double> pre_logits);

/// Full forward pass. The trace records every hidden activation unless
/// disabled (throughput benchmarking).
ForwardResult network_forward(const SugenoNetwork& net, const BipolarVector& xbar,
                              bool with_trace = true);

}  // namespace sugenn
