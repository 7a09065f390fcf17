#include "sugenn/core.hpp"

#include <bit>
#include <cmath>
#include <utility>

namespace sugenn {

BipolarVector::BipolarVector(std::span<const int> values) {
  BitVec packed(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 1 && values[i] != -1)
      throw error("BipolarVector: element " + std::to_string(i) + " is " +
                  std::to_string(values[i]) + ", expected -1 or +1");
    if (values[i] == 1) packed.set(i);
  }
  packed_ = std::move(packed);
}

BipolarVector BipolarVector::from_packed(BitVec packed) {
  BipolarVector v;
  v.packed_ = std::move(packed);
  return v;
}

BipolarVector BipolarVector::negated() const {
  return from_packed(packed_.complement());
}

std::vector<int> BipolarVector::to_ints() const {
  std::vector<int> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = (*this)[i];
  return out;
}

std::string BipolarVector::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ',';
    s += (*this)[i] > 0 ? "+1" : "-1";
  }
  s += ')';
  return s;
}

PolarizedVector PolarizedVector::from_bits(BitVec bits, std::size_t n) {
  if (bits.size() != 2 * n)
    throw dimension_error("PolarizedVector: expected " + std::to_string(2 * n) +
                          " bits, got " + std::to_string(bits.size()));
  // Exactly one literal per pair: within each word, the even (plus) bits
  // xored with the odd (minus) bits must all come out set.
  constexpr std::uint64_t kEven = 0x5555555555555555ull;
  const auto words = bits.words();
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const std::size_t pairs_here =
        std::min<std::size_t>(32, n - std::min(n, wi * 32));
    if (pairs_here == 0) break;
    const std::uint64_t pair_mask =
        pairs_here == 32 ? kEven : ((std::uint64_t{1} << (2 * pairs_here)) - 1) & kEven;
    const std::uint64_t plus = words[wi] & kEven;
    const std::uint64_t minus = (words[wi] >> 1) & kEven;
    if ((plus ^ minus) != pair_mask) {
      const std::uint64_t bad = (plus ^ minus) ^ pair_mask;
      const std::size_t coord = wi * 32 + static_cast<std::size_t>(std::countr_zero(bad)) / 2;
      throw malformed_polarization(
          "PolarizedVector: coordinate " + std::to_string(coord + 1) +
          " does not have exactly one active literal");
    }
  }
  return PolarizedVector(std::move(bits), n);
}

PolarizedVector PolarizedVector::from_activations(std::span<const std::uint8_t> y) {
  BitVec bits(2 * y.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    bits.set(y[j] ? positive_literal(j) : negative_literal(j));
  return PolarizedVector(std::move(bits), y.size());
}

LiteralSet::LiteralSet(BitVec members, std::size_t n) : members_(std::move(members)), n_(n) {
  if (members_.size() != 2 * n)
    throw dimension_error("LiteralSet: expected " + std::to_string(2 * n) +
                          " positions, got " + std::to_string(members_.size()));
}

std::string literal_name(std::size_t pos) {
  return std::to_string(literal_coordinate(pos) + 1) +
         (literal_is_positive(pos) ? '+' : '-');
}

Network::Network(std::vector<std::vector<HiddenNeuron>> hidden_layers,
                 std::vector<OutputNeuron> output_layer)
    : hidden_(std::move(hidden_layers)), output_(std::move(output_layer)) {
  if (hidden_.empty()) throw dimension_error("Network: at least one hidden layer required");
  if (output_.empty()) throw dimension_error("Network: output layer is empty");
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    if (hidden_[l].empty())
      throw dimension_error("Network: hidden layer " + std::to_string(l) + " is empty");
    const std::size_t fan_in = hidden_[l].front().weights.size();
    if (fan_in == 0)
      throw dimension_error("Network: hidden layer " + std::to_string(l) +
                            " has zero-width neurons");
    for (const auto& neuron : hidden_[l])
      if (neuron.weights.size() != fan_in)
        throw dimension_error("Network: inconsistent widths in hidden layer " +
                              std::to_string(l));
    if (l > 0 && fan_in != hidden_[l - 1].size())
      throw dimension_error("Network: hidden layer " + std::to_string(l) +
                            " expects width " + std::to_string(fan_in) +
                            " but layer " + std::to_string(l - 1) + " has " +
                            std::to_string(hidden_[l - 1].size()) + " neurons");
  }
  const std::size_t last_width = hidden_.back().size();
  for (const auto& unit : output_)
    if (unit.weights.size() != last_width)
      throw dimension_error("Network: output layer expects width " +
                            std::to_string(last_width));
}

PolarizedVector polarize(const BipolarVector& xbar) {
  const std::size_t n = xbar.size();
  BitVec bits(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    bits.set(xbar[i] > 0 ? positive_literal(i) : negative_literal(i));
  return PolarizedVector::from_bits(std::move(bits), n);
}

BipolarVector depolarize(const PolarizedVector& x) {
  const std::size_t n = x.base_dimension();
  BitVec packed(n);
  for (std::size_t i = 0; i < n; ++i)
    if (x.plus(i)) packed.set(i);
  return BipolarVector::from_packed(std::move(packed));
}

LiteralSet lambda_set(const BipolarVector& wbar) {
  const std::size_t n = wbar.size();
  BitVec members(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    members.set(wbar[i] > 0 ? positive_literal(i) : negative_literal(i));
  return LiteralSet(std::move(members), n);
}

BipolarVector lambda_weights(const LiteralSet& lambda) {
  const std::size_t n = lambda.base_dimension();
  if (lambda.count() != n)
    throw error("lambda_weights: set must pick exactly one literal per coordinate");
  BitVec packed(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda.contains(positive_literal(i))) packed.set(i);
  }
  return BipolarVector::from_packed(std::move(packed));
}

NeuronDecision decide_tau(double theta, std::size_t n) {
  if (n == 0) throw dimension_error("decide_tau: n must be positive");
  if (std::isnan(theta)) throw error("decide_tau: theta is NaN");
  const double t = std::ceil((theta + static_cast<double>(n)) / 2.0);
  if (t <= 0.0) return {NeuronDecision::Kind::always_active, 0};
  if (t > static_cast<double>(n)) return {NeuronDecision::Kind::never_active, 0};
  return {NeuronDecision::Kind::threshold, static_cast<int>(t)};
}

BitVec match_bits(const BipolarVector& xbar, const BipolarVector& wbar) {
  if (xbar.size() != wbar.size())
    throw dimension_error("match_bits: length mismatch (" +
                          std::to_string(xbar.size()) + " vs " +
                          std::to_string(wbar.size()) + ")");
  return (xbar.packed() ^ wbar.packed()).complement();
}

std::size_t match_count(const BipolarVector& xbar, const BipolarVector& wbar) {
  if (xbar.size() != wbar.size())
    throw dimension_error("match_count: length mismatch (" +
                          std::to_string(xbar.size()) + " vs " +
                          std::to_string(wbar.size()) + ")");
  const auto xw = xbar.packed().words();
  const auto ww = wbar.packed().words();
  std::size_t differ = 0;
  for (std::size_t i = 0; i < xw.size(); ++i)
    differ += static_cast<std::size_t>(std::popcount(xw[i] ^ ww[i]));
  return xbar.size() - differ;
}

std::size_t active_match_count(const PolarizedVector& x, const LiteralSet& lambda) {
  if (x.base_dimension() != lambda.base_dimension())
    throw dimension_error("active_match_count: base dimension mismatch");
  return intersection_count(x.bits(), lambda.members());
}

BatchNormFold fold_batchnorm(const BatchNormParams& bn, const BipolarVector& wbar) {
  if (!(bn.stddev > 0.0))
    throw error("fold_batchnorm: stddev must be positive");
  BatchNormFold fold;
  if (bn.gamma == 0.0) {
    fold.is_constant = true;
    fold.constant_sign = bn.beta >= 0.0 ? +1 : -1;
    return fold;
  }
  const double pivot = bn.mean - bn.beta * bn.stddev / bn.gamma;
  if (bn.gamma > 0.0) {
    fold.weights = wbar;
    fold.theta = pivot;
  } else {
    // gamma < 0 turns the test into s <= pivot; negating the weights restores
    // the >= convention.
    fold.weights = wbar.negated();
    fold.theta = -pivot;
  }
  return fold;
}

BipolarVector sign_binarize(std::span<const double> values,
                            std::span<const double> thresholds) {
  if (values.size() != thresholds.size())
    throw dimension_error("sign_binarize: length mismatch");
  BitVec packed(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= thresholds[i]) packed.set(i);
  return BipolarVector::from_packed(std::move(packed));
}

}  // namespace sugenn
