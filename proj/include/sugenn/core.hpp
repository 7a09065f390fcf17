#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sugenn/bitvec.hpp"
#include "sugenn/errors.hpp"

namespace sugenn {

/// Sign vector over {-1,+1}, packed one bit per coordinate (+1 -> 1, -1 -> 0).
/// Used for inputs, hidden activations, and weight rows alike.
class BipolarVector {
 public:
  BipolarVector() = default;

  explicit BipolarVector(std::span<const int> values);
  BipolarVector(std::initializer_list<int> values)
      : BipolarVector(std::span<const int>(values.begin(), values.size())) {}

  /// Adopts an already packed sign vector (set bit means +1).
  static BipolarVector from_packed(BitVec packed);

  std::size_t size() const { return packed_.size(); }
  int operator[](std::size_t i) const { return packed_.test(i) ? +1 : -1; }

  /// The +1 -> 1 packing; the operand of the xor/popcount match kernel.
  const BitVec& packed() const { return packed_; }

  BipolarVector negated() const;
  std::vector<int> to_ints() const;
  std::string to_string() const;  // "(+1,-1,+1)"

  friend bool operator==(const BipolarVector&, const BipolarVector&) = default;

 private:
  BitVec packed_;
};

/// {0,1} vector over the doubled literal index set I = {1+,1-,...,n+,n-},
/// with exactly one of each pair set. Positions: coordinate i (0-based) owns
/// bits 2i (positive literal) and 2i+1 (negative literal).
class PolarizedVector {
 public:
  PolarizedVector() = default;

  /// Validates the exactly-one invariant; throws malformed_polarization.
  static PolarizedVector from_bits(BitVec bits, std::size_t base_dimension);

  /// Builds from a layer's {0,1} activations: y_j -> (j+, 1 - y_j -> j-).
  static PolarizedVector from_activations(std::span<const std::uint8_t> y);

  std::size_t base_dimension() const { return n_; }

  /// The active set E(x) as a 2n-wide bit vector.
  const BitVec& bits() const { return bits_; }

  bool plus(std::size_t i) const { return bits_.test(2 * i); }
  bool minus(std::size_t i) const { return bits_.test(2 * i + 1); }

  friend bool operator==(const PolarizedVector&, const PolarizedVector&) = default;

 private:
  PolarizedVector(BitVec bits, std::size_t n) : bits_(std::move(bits)), n_(n) {}

  BitVec bits_;
  std::size_t n_ = 0;
};

/// Subset of the literal index set I, same bit layout as PolarizedVector.
class LiteralSet {
 public:
  LiteralSet() = default;
  LiteralSet(BitVec members, std::size_t base_dimension);

  std::size_t base_dimension() const { return n_; }
  const BitVec& members() const { return members_; }
  std::size_t count() const { return members_.count(); }
  bool contains(std::size_t literal_pos) const { return members_.test(literal_pos); }

  friend bool operator==(const LiteralSet&, const LiteralSet&) = default;

 private:
  BitVec members_;
  std::size_t n_ = 0;
};

/// Literal position helpers for the 2i/2i+1 layout.
constexpr std::size_t positive_literal(std::size_t coord) { return 2 * coord; }
constexpr std::size_t negative_literal(std::size_t coord) { return 2 * coord + 1; }
constexpr std::size_t literal_coordinate(std::size_t pos) { return pos / 2; }
constexpr bool literal_is_positive(std::size_t pos) { return pos % 2 == 0; }
constexpr int literal_sign(std::size_t pos) { return literal_is_positive(pos) ? +1 : -1; }

/// "3-" for the negative literal of coordinate 3 (1-based display).
std::string literal_name(std::size_t pos);

/// Thresholded weighted sum unit: activates when sum(w_i * x_i) >= theta.
struct HiddenNeuron {
  BipolarVector weights;
  double theta = 0.0;
};

/// Affine output unit: score = sum(w_i * x_i) + bias.
struct OutputNeuron {
  BipolarVector weights;
  double bias = 0.0;
};

/// Match-count decision equivalent to the bipolar threshold test, or one of
/// the two degenerate constants when tau falls outside [1, n].
struct NeuronDecision {
  enum class Kind { threshold, always_active, never_active };

  Kind kind = Kind::never_active;
  int tau = 0;  // meaningful only for Kind::threshold

  bool accepts(std::size_t match_count) const {
    switch (kind) {
      case Kind::threshold: return match_count >= static_cast<std::size_t>(tau);
      case Kind::always_active: return true;
      case Kind::never_active: return false;
    }
    return false;
  }

  bool is_constant() const { return kind != Kind::threshold; }

  friend bool operator==(const NeuronDecision&, const NeuronDecision&) = default;
};

/// Layered bipolar network: hidden layers of threshold neurons plus an affine
/// output layer, widths chained. At least one hidden layer and one class.
class Network {
 public:
  Network(std::vector<std::vector<HiddenNeuron>> hidden_layers,
          std::vector<OutputNeuron> output_layer);

  const std::vector<std::vector<HiddenNeuron>>& hidden_layers() const {
    return hidden_;
  }
  const std::vector<OutputNeuron>& output_layer() const { return output_; }

  std::size_t input_width() const { return hidden_.front().front().weights.size(); }
  std::size_t class_count() const { return output_.size(); }

  /// Input width of hidden layer `layer` (0-based).
  std::size_t layer_input_width(std::size_t layer) const {
    return hidden_[layer].front().weights.size();
  }

 private:
  std::vector<std::vector<HiddenNeuron>> hidden_;
  std::vector<OutputNeuron> output_;
};

// ---------------------------------------------------------------------------
// Encoding operations
// ---------------------------------------------------------------------------

/// Two-literal encoding: bit i+ set iff x_i = +1, bit i- set iff x_i = -1.
PolarizedVector polarize(const BipolarVector& xbar);

/// Inverse of polarize.
BipolarVector depolarize(const PolarizedVector& x);

/// Lambda(w): per coordinate, the literal matching the weight's sign.
LiteralSet lambda_set(const BipolarVector& wbar);

/// Inverse of lambda_set for one-literal-per-coordinate sets.
BipolarVector lambda_weights(const LiteralSet& lambda);

/// tau = ceil((theta + n) / 2), clamped to the constant decisions when the
/// threshold cannot be met or is always met. theta may be any finite real.
NeuronDecision decide_tau(double theta, std::size_t n);

/// Per-coordinate agreement bits z_i = [x_i == w_i], width n.
BitVec match_bits(const BipolarVector& xbar, const BipolarVector& wbar);

/// Number of agreeing coordinates, computed as n - popcount(x ^ w) on the
/// packed sign bits.
std::size_t match_count(const BipolarVector& xbar, const BipolarVector& wbar);

/// |E(x) intersect Lambda| on the polarized side; equals match_count.
std::size_t active_match_count(const PolarizedVector& x, const LiteralSet& lambda);

/// Batch-norm parameters with variance and epsilon pre-combined into stddev.
struct BatchNormParams {
  double gamma = 1.0;
  double beta = 0.0;
  double mean = 0.0;
  double stddev = 1.0;
};

/// Result of folding batch normalization + sign into a plain threshold test.
struct BatchNormFold {
  bool is_constant = false;
  int constant_sign = 0;    // +1 or -1 when is_constant
  BipolarVector weights;    // when !is_constant
  double theta = 0.0;       // when !is_constant
};

/// Folds sign(gamma * (s - mean) / stddev + beta) into an equivalent
/// (weights', theta) threshold test on the raw sum, or a constant when
/// gamma == 0. Requires stddev > 0.
BatchNormFold fold_batchnorm(const BatchNormParams& bn, const BipolarVector& wbar);

/// Per-feature sign thresholding of real inputs: +1 iff u_i >= threshold_i.
BipolarVector sign_binarize(std::span<const double> values,
                            std::span<const double> thresholds);

}  // namespace sugenn
